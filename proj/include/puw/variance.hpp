#pragma once

#include <cstdint>
#include <string_view>

#include "puw/summation.hpp"
#include "puw/zonal.hpp"

namespace puw {

enum class ComputationPath { gegenbauer_coefficients, s_series };

std::string_view to_string(ComputationPath path) noexcept;

struct UncertaintyDiagnostics {
  ComputationPath path = ComputationPath::gegenbauer_coefficients;
  std::int64_t terms_used = 0;
  double tail_estimate = 0.0;
  /// Space variance came out in [-1e-12, 0) and was clamped to zero.
  bool space_variance_clamped = false;
};

struct UncertaintyResult {
  double var_space = 0.0;
  double var_momentum = 0.0;
  /// sqrt(var_space * var_momentum)
  double product = 0.0;
  UncertaintyDiagnostics diagnostics;
};

/// Lower bound n/2 of the uncertainty product of zonal functions on S^n.
inline double uncertainty_lower_bound(int n) noexcept { return 0.5 * n; }

/// Space variance from Gegenbauer coefficients:
///   (N/D)^2 - 1,
///   N = sum lambda/(l+lambda) binom(l+2lambda-1, l) f^(l)^2,
///   D = sum binom(l+2lambda, l) 2 lambda^2 f^(l) f^(l+1) / ((l+lambda)(l+lambda+1)).
/// Throws DegenerateInputError when |D| < 1e-300 (the function has no centre
/// of mass) or the result is below -1e-12.
double variance_space(const ZonalFunction& f, const SeriesTruncation& trunc);

/// Momentum variance: mean Laplace-Beltrami eigenvalue l(l+2 lambda) under
/// the same weighted coefficient energy as N above. Throws
/// DegenerateInputError when the energy is below 1e-300.
double variance_momentum(const ZonalFunction& f, const SeriesTruncation& trunc);

/// Both variances and their product from one pass over the coefficients.
/// Throws BoundViolationError if the product is below n/2 - 1e-9 n.
UncertaintyResult uncertainty_product(const ZonalFunction& f, const SeriesTruncation& trunc);

/// Poisson wavelet variances through the series S_j:
///   var_S = (e^rho A / (2B))^2 - 1,   var_M = C / A,
///   A = 2/(n-1) S_{2m+1} + S_{2m},
///   B = sum_j binom(m, j) (S_{m+j+1}/(n-1) + S_{m+j}),
///   C = 2/(n-1) S_{2m+3} + 3 S_{2m+2} + (n-1) S_{2m+1}.
UncertaintyResult poisson_uncertainty_via_s(const PoissonWaveletSpec& spec,
                                            const SeriesTruncation& trunc);

}  // namespace puw
