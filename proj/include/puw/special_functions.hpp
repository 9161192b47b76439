#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace puw {

/// Reduced fraction of machine integers, den > 0. Used for the Gegenbauer
/// index lambda = (n-1)/2, which is always an integer or a half-integer.
struct SmallRational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static SmallRational make(std::int64_t num, std::int64_t den);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const SmallRational&, const SmallRational&) = default;
};

/// Dimension data of the unit sphere S^n in R^{n+1}.
class SphereDim {
 public:
  /// Throws DomainError for n < 2.
  explicit SphereDim(int n);

  int n() const noexcept { return n_; }
  /// lambda = (n-1)/2, held exactly.
  SmallRational lambda() const noexcept { return lambda_; }
  double lambda_value() const noexcept { return lambda_.value(); }
  /// Surface measure Sigma_n = 2 pi^{lambda+1} / Gamma(lambda+1).
  double surface() const noexcept { return surface_; }

  friend bool operator==(const SphereDim& a, const SphereDim& b) noexcept { return a.n_ == b.n_; }

 private:
  int n_;
  SmallRational lambda_;
  double surface_;
};

/// C_l^lambda(t) by the forward three-term recurrence
///   l C_l = 2(l+lambda-1) t C_{l-1} - (l+2 lambda-2) C_{l-2},
/// C_0 = 1, C_1 = 2 lambda t. Throws DomainError for lambda <= 0, l < 0 or
/// t outside [-1, 1].
double gegenbauer_eval(int l, SmallRational lambda, double t);

/// Same recurrence carried in double-double arithmetic. Intended for
/// degrees beyond a few hundred, where the plain recurrence loses digits.
double gegenbauer_eval_compensated(int l, SmallRational lambda, double t);

/// Exact binomial coefficient; 0 when b > a.
mpz_class binomial(unsigned long a, unsigned long b);

/// Gamma at a positive integer or half-integer, from factorials and sqrt(pi).
double gamma_half_integer(SmallRational x);

/// Sigma_n; throws DomainError for n < 2.
double surface_measure(int n);

}  // namespace puw
