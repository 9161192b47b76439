#pragma once

#include <cstdint>

#include "puw/summation.hpp"

namespace puw {

struct SeriesValue {
  double value = 0.0;
  std::int64_t terms_used = 0;
  double tail_estimate = 0.0;
  bool closed_form = false;
};

/// S_0(rho) = (1 - e^{-2 rho})^{-(n-1)}.
double s_zero_closed_form(int n, double rho);

/// S_m(rho) = sum_{l>=0} binom(l+n-2, l) l^m e^{-2 rho l}, always by direct
/// compensated summation (m = 0 included). The stopping rule only engages
/// past the term peak l* = (n-2+m)/(2 rho).
/// Throws DomainError for n < 2, m < 0 or rho <= 0; TruncationError when
/// trunc.max_terms is exhausted.
SeriesValue s_m_sum(int n, int m, double rho, const SeriesTruncation& trunc);

/// S_m(rho); m = 0 uses the closed form, m >= 1 sums directly.
SeriesValue s_m_eval(int n, int m, double rho, const SeriesTruncation& trunc);

}  // namespace puw
