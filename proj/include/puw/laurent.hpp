#pragma once

#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace puw {

using Rational = mpq_class;

/// "p/q" with q >= 1, also for integers ("3/1").
std::string fraction_string(const Rational& q);

/// Laurent series in rho with exact rational coefficients on the contiguous
/// exponent window [lo, order), plus an O(rho^order) remainder.
///
/// The window is normalized so that its first coefficient is nonzero; a
/// series that vanishes on its whole window has lo == order and no
/// coefficients. Arithmetic never claims more accuracy than the operands
/// justify: every result order is derived from operand orders and leading
/// exponents.
class TruncatedLaurentSeries {
 public:
  /// The zero series with remainder O(1).
  TruncatedLaurentSeries() = default;
  /// Coefficients for exponents lo, lo+1, ...; order = lo + coeffs.size().
  TruncatedLaurentSeries(int lo, std::vector<Rational> coeffs);

  static TruncatedLaurentSeries zero(int order);
  static TruncatedLaurentSeries constant(const Rational& c, int order);
  /// Taylor series of e^{k rho}: coefficients k^j / j!, j < order.
  static TruncatedLaurentSeries exp_series(const Rational& k, int order);

  int lo() const noexcept { return lo_; }
  int order() const noexcept { return lo_ + static_cast<int>(coeffs_.size()); }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Exponent of the leading term; equals order() for the zero series.
  int valuation() const noexcept { return lo_; }
  /// Throws SeriesArithmeticError for the zero series.
  const Rational& leading() const;
  /// Coefficient of rho^e (zero below the window). Throws
  /// SeriesArithmeticError when e >= order(), where it is unknown.
  Rational coefficient(int e) const;
  std::span<const Rational> coefficients() const noexcept { return coeffs_; }

  /// Drops every term at or beyond rho^new_order (new_order <= order()).
  TruncatedLaurentSeries truncated(int new_order) const;
  TruncatedLaurentSeries derivative() const;
  TruncatedLaurentSeries scaled(const Rational& c) const;
  /// Multiplication by rho^k.
  TruncatedLaurentSeries shifted(int k) const;
  /// Throws SeriesArithmeticError for the zero series.
  TruncatedLaurentSeries reciprocal() const;
  /// k >= 1.
  TruncatedLaurentSeries pow(unsigned k) const;

  double evaluate(double rho) const;
  std::vector<std::string> fraction_strings() const;

  friend TruncatedLaurentSeries operator+(const TruncatedLaurentSeries& a,
                                          const TruncatedLaurentSeries& b);
  friend TruncatedLaurentSeries operator-(const TruncatedLaurentSeries& a,
                                          const TruncatedLaurentSeries& b);
  friend TruncatedLaurentSeries operator*(const TruncatedLaurentSeries& a,
                                          const TruncatedLaurentSeries& b);
  friend TruncatedLaurentSeries operator/(const TruncatedLaurentSeries& a,
                                          const TruncatedLaurentSeries& b);
  TruncatedLaurentSeries operator-() const { return scaled(Rational(-1)); }

  /// Same window, same order, same coefficients.
  friend bool operator==(const TruncatedLaurentSeries& a, const TruncatedLaurentSeries& b);

 private:
  void normalize();

  int lo_ = 0;
  std::vector<Rational> coeffs_;
};

/// sqrt(radicand) * rho^shift * tail(rho), tail = 1 + O(rho).
struct NormalizedRadicalSeries {
  Rational radicand;
  int shift = 0;
  TruncatedLaurentSeries tail;

  /// Coefficient of rho in the tail (zero when the tail stops at O(rho)).
  Rational slope() const;
  /// radicand * rho^{2 shift} * tail^2.
  TruncatedLaurentSeries squared() const;
  double evaluate(double rho) const;
};

/// Square root of c0 rho^{2k} (1 + O(rho)), c0 > 0. Throws
/// SeriesArithmeticError for the zero series, an odd leading exponent or a
/// negative leading coefficient.
NormalizedRadicalSeries sqrt_normalized(const TruncatedLaurentSeries& x);

/// F(rho) = 1/(1 - e^{-2 rho}) with remainder O(rho^order), order >= 0.
TruncatedLaurentSeries expand_F(int order);

/// S_0(rho) = F(rho)^{n-1} with remainder O(rho^order).
TruncatedLaurentSeries expand_s0(int n, int order);

/// S_m(rho) = (-1/2 d/drho)^m S_0 with remainder O(rho^order).
TruncatedLaurentSeries expand_sm(int n, int m, int order);

/// S_0 .. S_{j_max}; S_j carries remainder O(rho^{top_order + j_max - j}).
std::vector<TruncatedLaurentSeries> expand_s_table(int n, int j_max, int top_order);

/// Numerator and denominator series of the Poisson wavelet variances:
///   A = 2/(n-1) S_{2m+1} + S_{2m},
///   B = sum_j binom(m, j) (S_{m+j+1}/(n-1) + S_{m+j}),
///   C = 2/(n-1) S_{2m+3} + 3 S_{2m+2} + (n-1) S_{2m+1}.
/// Each carries `relative_terms` coefficients starting from its pole.
struct ABCSeries {
  TruncatedLaurentSeries A;
  TruncatedLaurentSeries B;
  TruncatedLaurentSeries C;
};
ABCSeries derive_ABC(int n, int m, int relative_terms = 4);

/// Small-scale expansions of var_S, var_M and U for g_rho^m.
/// With extra_terms = 0: var_S through rho^3, var_M through rho^{-1}, and the
/// U tail through rho^1. Each extra term extends all three by one power.
struct VarianceExpansions {
  TruncatedLaurentSeries var_space;
  TruncatedLaurentSeries var_momentum;
  NormalizedRadicalSeries product;
};
VarianceExpansions expand_variances(int n, int m, int extra_terms = 0);

}  // namespace puw
