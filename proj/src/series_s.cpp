#include "puw/series_s.hpp"

#include <array>
#include <cmath>
#include <string>

#include "puw/errors.hpp"

namespace puw {

namespace {

void check_args(int n, int m, double rho) {
  if (n < 2) {
    throw DomainError("S_m: n must be >= 2 (got " + std::to_string(n) + ")");
  }
  if (m < 0) {
    throw DomainError("S_m: m must be >= 0");
  }
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("S_m: rho must be a positive finite number");
  }
}

}  // namespace

double s_zero_closed_form(int n, double rho) {
  check_args(n, 0, rho);
  return std::pow(-std::expm1(-2.0 * rho), -(n - 1));
}

SeriesValue s_m_sum(int n, int m, double rho, const SeriesTruncation& trunc) {
  check_args(n, m, rho);
  trunc.validate();
  // Term l is binom(l+n-2, n-2) l^m e^{-2 rho l}, written as a product of
  // p = n-2+m factors ((l+k)/k) e^{-2 rho l/p} and (l e^{-2 rho l/p}). Each
  // factor is bounded by roughly p/(2 e rho), so intermediate values stay
  // representable whenever the term itself is.
  const int p = n - 2 + m;
  auto term = [n, m, p, rho](std::int64_t l) -> std::array<double, 1> {
    const double x = static_cast<double>(l);
    if (p == 0) {
      return {std::exp(-2.0 * rho * x)};
    }
    if (l == 0) {
      return {m == 0 ? 1.0 : 0.0};
    }
    const double e = std::exp(-2.0 * rho * x / p);
    double t = 1.0;
    for (int k = 1; k <= n - 2; ++k) {
      t *= (x + k) / k * e;
    }
    for (int j = 0; j < m; ++j) {
      t *= x * e;
    }
    return {t};
  };
  const double peak = p / (2.0 * rho);
  const auto sums = sum_until_converged<1>(term, 0, peak, trunc, "S_m");
  return SeriesValue{sums.values[0], sums.diagnostics.terms_used, sums.diagnostics.tail_estimate, false};
}

SeriesValue s_m_eval(int n, int m, double rho, const SeriesTruncation& trunc) {
  check_args(n, m, rho);
  if (m == 0) {
    return SeriesValue{s_zero_closed_form(n, rho), 0, 0.0, true};
  }
  return s_m_sum(n, m, rho, trunc);
}

}  // namespace puw
