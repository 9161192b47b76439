#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "puw/special_functions.hpp"
#include "puw/summation.hpp"

namespace puw {

/// Gegenbauer coefficient rule l -> f^(l), defined for every l >= 0.
using CoefficientRule = std::function<double(std::int64_t)>;

/// Zonal function on S^n, f(cos theta) = sum_l f^(l) C_l^lambda(cos theta).
/// Immutable once built; safe to share between threads.
struct ZonalFunction {
  SphereDim dim;
  CoefficientRule coeff;
  std::string label;
  /// Degree near which the weighted coefficient energy peaks, when known.
  /// Summations will not stop before it.
  double peak_degree = 0.0;

  /// c * f, same dimension and peak.
  ZonalFunction scaled(double c) const;
};

/// Parameters of the Poisson wavelet g_rho^m on S^n.
struct PoissonWaveletSpec {
  SphereDim dim;
  int m;
  double rho;
  /// r = exp(-rho), the radius of the pole point inside the ball.
  double r;

  /// Throws DomainError for n < 2, m < 1 or rho <= 0 (or non-finite).
  static PoissonWaveletSpec make(int n, int m, double rho);
};

/// g_rho^m: coefficients (1/Sigma_n) ((l+lambda)/lambda) (rho l)^m e^{-rho l}.
ZonalFunction poisson_wavelet_coefficients(const PoissonWaveletSpec& spec);

/// f_rho^m = (Sigma_n / rho^m) g_rho^m: coefficients ((l+lambda)/lambda) l^m e^{-rho l}.
ZonalFunction rescaled_poisson_wavelet_coefficients(const PoissonWaveletSpec& spec);

/// Poisson kernel p_rho: coefficients (1/Sigma_n) ((l+lambda)/lambda) e^{-rho l}.
ZonalFunction poisson_kernel_coefficients(const SphereDim& dim, double rho);

/// Closed form (1/Sigma_n) (1-r^2) / (1 - 2 r cos theta + r^2)^{(n+1)/2},
/// r = e^{-rho}. Throws DomainError for rho <= 0 or theta outside [0, pi].
double poisson_kernel_eval(const SphereDim& dim, double rho, double theta);

struct ZonalValue {
  double value = 0.0;
  std::int64_t terms_used = 0;
  double tail_estimate = 0.0;
};

/// Partial Gegenbauer sum at angle theta. Terms are bounded by
/// |f^(l)| C_l^lambda(1); the stopping rule is applied to those bounds, so the
/// result is reliable even where f(theta) itself is close to zero.
/// Throws TruncationError when trunc.max_terms is exhausted.
ZonalValue zonal_eval(const ZonalFunction& f, double theta, const SeriesTruncation& trunc);

}  // namespace puw
