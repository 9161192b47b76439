#include "puw/zonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "puw/detail/double_double.hpp"
#include "puw/errors.hpp"

namespace puw {

namespace {

double ipow(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) {
    out *= x;
  }
  return out;
}

void check_scale(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("rho must be a positive finite number");
  }
}

}  // namespace

ZonalFunction ZonalFunction::scaled(double c) const {
  ZonalFunction out = *this;
  out.coeff = [inner = coeff, c](std::int64_t l) { return c * inner(l); };
  out.label = std::to_string(c) + "*(" + label + ")";
  return out;
}

PoissonWaveletSpec PoissonWaveletSpec::make(int n, int m, double rho) {
  SphereDim dim(n);
  if (m < 1) {
    throw DomainError("m must be >= 1 (got " + std::to_string(m) + ")");
  }
  check_scale(rho);
  return PoissonWaveletSpec{dim, m, rho, std::exp(-rho)};
}

// (rho l)^m e^{-rho l} is evaluated as (rho l e^{-rho l / m})^m: every factor
// stays below m/e, so nothing overflows or underflows before the product does.
ZonalFunction poisson_wavelet_coefficients(const PoissonWaveletSpec& spec) {
  const double lam = spec.dim.lambda_value();
  const double inv_surface = 1.0 / spec.dim.surface();
  const double rho = spec.rho;
  const int m = spec.m;
  ZonalFunction f{spec.dim,
                  [=](std::int64_t l) {
                    if (l == 0) {
                      return 0.0;
                    }
                    const double x = rho * static_cast<double>(l);
                    return inv_surface * ((static_cast<double>(l) + lam) / lam) *
                           ipow(x * std::exp(-x / m), m);
                  },
                  "g_rho^m(n=" + std::to_string(spec.dim.n()) + ", m=" + std::to_string(m) + ")",
                  (spec.dim.n() + 2.0 * m) / (2.0 * rho)};
  return f;
}

ZonalFunction rescaled_poisson_wavelet_coefficients(const PoissonWaveletSpec& spec) {
  const double lam = spec.dim.lambda_value();
  const double rho = spec.rho;
  const int m = spec.m;
  ZonalFunction f{spec.dim,
                  [=](std::int64_t l) {
                    if (l == 0) {
                      return 0.0;
                    }
                    const double x = static_cast<double>(l);
                    return ((x + lam) / lam) * ipow(x * std::exp(-rho * x / m), m);
                  },
                  "f_rho^m(n=" + std::to_string(spec.dim.n()) + ", m=" + std::to_string(m) + ")",
                  (spec.dim.n() + 2.0 * m) / (2.0 * rho)};
  return f;
}

ZonalFunction poisson_kernel_coefficients(const SphereDim& dim, double rho) {
  check_scale(rho);
  const double lam = dim.lambda_value();
  const double inv_surface = 1.0 / dim.surface();
  return ZonalFunction{dim,
                       [=](std::int64_t l) {
                         const double x = static_cast<double>(l);
                         return inv_surface * ((x + lam) / lam) * std::exp(-rho * x);
                       },
                       "p_rho(n=" + std::to_string(dim.n()) + ")", dim.n() / (2.0 * rho)};
}

double poisson_kernel_eval(const SphereDim& dim, double rho, double theta) {
  check_scale(rho);
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("poisson_kernel_eval: theta outside [0, pi]");
  }
  const double r = std::exp(-rho);
  // 1 - 2 r cos(theta) + r^2 = (1-r)^2 + 2 r (1 - cos theta), the second form
  // avoids cancellation near theta = 0.
  const double one_minus_r = -std::expm1(-rho);
  const double half = std::sin(0.5 * theta);
  const double dist2 = one_minus_r * one_minus_r + 4.0 * r * half * half;
  const double numer = -std::expm1(-2.0 * rho);
  return numer / std::pow(dist2, 0.5 * (dim.n() + 1)) / dim.surface();
}

ZonalValue zonal_eval(const ZonalFunction& f, double theta, const SeriesTruncation& trunc) {
  using namespace detail;
  trunc.validate();
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw DomainError("zonal_eval: theta outside [0, pi]");
  }
  const double lam = f.dim.lambda_value();
  const double t = std::cos(theta);

  // Near theta = pi the terms alternate and cancel heavily, so the recurrence
  // and the accumulation run in double-double.
  DoubleDouble value;
  CompensatedSum bound_total;
  DoubleDouble c_prev;
  DoubleDouble c_cur{1.0, 0.0};  // C_0
  double weight = 1.0;           // C_l^lambda(1) = binom(l + 2 lambda - 1, l)
  double prev_bound = 0.0;
  int quiet_streak = 0;
  std::int64_t count = 0;
  double last_bound = 0.0;
  for (std::int64_t l = 0;; ++l) {
    if (count >= trunc.max_terms) {
      throw TruncationError("zonal_eval: no convergence within " + std::to_string(trunc.max_terms) +
                                " terms",
                            count);
    }
    if (l >= 1) {
      const double k = static_cast<double>(l);
      DoubleDouble next;
      if (l == 1) {
        next = two_prod(2.0 * lam, t);
      } else {
        const DoubleDouble a = two_prod(2.0 * (k + lam - 1.0), t);
        const DoubleDouble b{-(k + 2.0 * lam - 2.0), 0.0};
        next = dd_div(dd_add(dd_mul(a, c_cur), dd_mul(b, c_prev)), k);
      }
      c_prev = c_cur;
      c_cur = next;
      weight *= (k + 2.0 * lam - 1.0) / k;
    }
    const double a = f.coeff(l);
    if (!std::isfinite(a)) {
      throw DomainError("zonal_eval: non-finite coefficient at l = " + std::to_string(l));
    }
    ++count;
    value = dd_add(value, dd_mul(DoubleDouble{a, 0.0}, c_cur));
    const double bound = std::abs(a) * weight;
    bound_total.add(bound);
    // Relative to the value, not to the sum of magnitudes; the floor keeps a
    // value that cancels to zero from running to max_terms.
    const double scale =
        std::max(std::abs(value.value()), std::numeric_limits<double>::epsilon() * bound_total.value());
    double tail = bound;
    if (count > 1 && bound > 0.0) {
      tail = bound < prev_bound ? bound * (bound / prev_bound) / (1.0 - bound / prev_bound)
                                : std::numeric_limits<double>::infinity();
    }
    const bool quiet = count >= trunc.min_terms && static_cast<double>(l) >= f.peak_degree &&
                       bound <= trunc.rel_tol * scale && tail <= trunc.rel_tol * scale;
    quiet_streak = quiet ? quiet_streak + 1 : 0;
    prev_bound = bound;
    last_bound = bound;
    if (quiet_streak >= 3) {
      break;
    }
  }
  const double v = value.value();
  return ZonalValue{v, count, v != 0.0 ? last_bound / std::abs(v) : 0.0};
}

}  // namespace puw
