#include "puw/variance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "puw/errors.hpp"
#include "puw/series_s.hpp"

namespace puw {

std::string_view to_string(ComputationPath path) noexcept {
  switch (path) {
    case ComputationPath::gegenbauer_coefficients:
      return "gegenbauer_coefficients";
    case ComputationPath::s_series:
      return "s_series";
  }
  return "unknown";
}

namespace {

constexpr double kTinyDenominator = 1e-300;
constexpr double kClampThreshold = -1e-12;

struct CoefficientSums {
  double energy = 0.0;      // N
  double coupling = 0.0;    // D
  double laplacian = 0.0;   // numerator of var_M
  SumDiagnostics diagnostics;
};

CoefficientSums coefficient_sums(const ZonalFunction& f, const SeriesTruncation& trunc) {
  trunc.validate();
  const int n = f.dim.n();
  const double lam = f.dim.lambda_value();
  double next_coeff = f.coeff(0);
  auto term = [&](std::int64_t l) -> std::array<double, 3> {
    const double x = static_cast<double>(l);
    const double a = next_coeff;
    next_coeff = f.coeff(l + 1);
    // binom(l+n-2, l) and binom(l+n-1, l)
    double w = 1.0;
    for (int k = 1; k <= n - 2; ++k) {
      w *= (x + k) / k;
    }
    const double w_up = w * (x + n - 1) / (n - 1);
    const double energy = lam / (x + lam) * w * a * a;
    const double coupling = w_up * 2.0 * lam * lam * a * next_coeff / ((x + lam) * (x + lam + 1.0));
    const double laplacian = x * (x + 2.0 * lam) * energy;
    return {energy, coupling, laplacian};
  };
  const auto sums = sum_until_converged<3>(term, 0, f.peak_degree, trunc, "variance sums");
  return CoefficientSums{sums.values[0], sums.values[1], sums.values[2], sums.diagnostics};
}

double space_variance_from_ratio(double ratio, bool& clamped) {
  double v = (ratio - 1.0) * (ratio + 1.0);
  clamped = false;
  if (v < 0.0) {
    if (v < kClampThreshold) {
      std::ostringstream msg;
      msg << "space variance is negative (" << v << "); the input has no valid centre of mass";
      throw DegenerateInputError(msg.str());
    }
    v = 0.0;
    clamped = true;
  }
  return v;
}

double space_variance_from_sums(const CoefficientSums& s, bool& clamped) {
  if (!(std::abs(s.coupling) >= kTinyDenominator)) {
    throw DegenerateInputError(
        "space variance undefined: the centre-of-mass series vanishes (integral of x|f|^2 is zero)");
  }
  return space_variance_from_ratio(s.energy / s.coupling, clamped);
}

double momentum_variance_from_sums(const CoefficientSums& s) {
  if (!(s.energy >= kTinyDenominator)) {
    throw DegenerateInputError("momentum variance undefined: the function has zero norm");
  }
  return s.laplacian / s.energy;
}

void check_bound(int n, double product) {
  const double bound = uncertainty_lower_bound(n);
  if (product < bound - 1e-9 * n) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "uncertainty product " << product << " is below the bound n/2 = " << bound;
    throw BoundViolationError(msg.str());
  }
}

}  // namespace

double variance_space(const ZonalFunction& f, const SeriesTruncation& trunc) {
  bool clamped = false;
  return space_variance_from_sums(coefficient_sums(f, trunc), clamped);
}

double variance_momentum(const ZonalFunction& f, const SeriesTruncation& trunc) {
  return momentum_variance_from_sums(coefficient_sums(f, trunc));
}

UncertaintyResult uncertainty_product(const ZonalFunction& f, const SeriesTruncation& trunc) {
  const CoefficientSums sums = coefficient_sums(f, trunc);
  UncertaintyResult out;
  out.var_space = space_variance_from_sums(sums, out.diagnostics.space_variance_clamped);
  out.var_momentum = momentum_variance_from_sums(sums);
  out.product = std::sqrt(out.var_space * out.var_momentum);
  out.diagnostics.path = ComputationPath::gegenbauer_coefficients;
  out.diagnostics.terms_used = sums.diagnostics.terms_used;
  out.diagnostics.tail_estimate = sums.diagnostics.tail_estimate;
  check_bound(f.dim.n(), out.product);
  return out;
}

UncertaintyResult poisson_uncertainty_via_s(const PoissonWaveletSpec& spec,
                                            const SeriesTruncation& trunc) {
  const int n = spec.dim.n();
  const int m = spec.m;
  UncertaintyResult out;
  out.diagnostics.path = ComputationPath::s_series;

  // S_m .. S_{2m+3}
  std::vector<double> s(2 * m + 4, 0.0);
  for (int j = m; j <= 2 * m + 3; ++j) {
    const SeriesValue v = s_m_eval(n, j, spec.rho, trunc);
    s[j] = v.value;
    out.diagnostics.terms_used = std::max(out.diagnostics.terms_used, v.terms_used);
    out.diagnostics.tail_estimate = std::max(out.diagnostics.tail_estimate, v.tail_estimate);
  }
  const double nm1 = n - 1;
  const double a = 2.0 / nm1 * s[2 * m + 1] + s[2 * m];
  CompensatedSum b;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    b.add(binom * (s[m + j + 1] / nm1 + s[m + j]));
    binom = binom * (m - j) / (j + 1);
  }
  const double c = 2.0 / nm1 * s[2 * m + 3] + 3.0 * s[2 * m + 2] + nm1 * s[2 * m + 1];

  const double ratio = std::exp(spec.rho) * a / (2.0 * b.value());
  out.var_space = space_variance_from_ratio(ratio, out.diagnostics.space_variance_clamped);
  out.var_momentum = c / a;
  out.product = std::sqrt(out.var_space * out.var_momentum);
  check_bound(n, out.product);
  return out;
}

}  // namespace puw
