#include "puw/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "puw/errors.hpp"
#include "puw/special_functions.hpp"

namespace puw {

std::string fraction_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

TruncatedLaurentSeries::TruncatedLaurentSeries(int lo, std::vector<Rational> coeffs)
    : lo_(lo), coeffs_(std::move(coeffs)) {
  normalize();
}

void TruncatedLaurentSeries::normalize() {
  std::size_t skip = 0;
  while (skip < coeffs_.size() && coeffs_[skip] == 0) {
    ++skip;
  }
  if (skip > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(skip));
    lo_ += static_cast<int>(skip);
  }
}

TruncatedLaurentSeries TruncatedLaurentSeries::zero(int order) {
  TruncatedLaurentSeries s;
  s.lo_ = order;
  return s;
}

TruncatedLaurentSeries TruncatedLaurentSeries::constant(const Rational& c, int order) {
  if (order <= 0) {
    return zero(order);
  }
  std::vector<Rational> coeffs(static_cast<std::size_t>(order), Rational(0));
  coeffs[0] = c;
  return TruncatedLaurentSeries(0, std::move(coeffs));
}

TruncatedLaurentSeries TruncatedLaurentSeries::exp_series(const Rational& k, int order) {
  std::vector<Rational> coeffs;
  Rational term(1);
  for (int j = 0; j < order; ++j) {
    coeffs.push_back(term);
    term *= k;
    term /= j + 1;
  }
  return TruncatedLaurentSeries(0, std::move(coeffs));
}

const Rational& TruncatedLaurentSeries::leading() const {
  if (is_zero()) {
    throw SeriesArithmeticError("leading coefficient of a series that vanishes on its window");
  }
  return coeffs_.front();
}

Rational TruncatedLaurentSeries::coefficient(int e) const {
  if (e >= order()) {
    throw SeriesArithmeticError("coefficient of rho^" + std::to_string(e) +
                                " lies beyond the truncation order " + std::to_string(order()));
  }
  if (e < lo_) {
    return Rational(0);
  }
  return coeffs_[static_cast<std::size_t>(e - lo_)];
}

TruncatedLaurentSeries TruncatedLaurentSeries::truncated(int new_order) const {
  if (new_order > order()) {
    throw SeriesArithmeticError("cannot extend a series beyond its truncation order");
  }
  if (new_order <= lo_) {
    return zero(new_order);
  }
  return TruncatedLaurentSeries(
      lo_, std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + (new_order - lo_)));
}

TruncatedLaurentSeries TruncatedLaurentSeries::derivative() const {
  if (is_zero()) {
    return zero(order() - 1);
  }
  std::vector<Rational> out(coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    out[i] = coeffs_[i] * (lo_ + static_cast<int>(i));
  }
  return TruncatedLaurentSeries(lo_ - 1, std::move(out));
}

TruncatedLaurentSeries TruncatedLaurentSeries::scaled(const Rational& c) const {
  if (c == 0) {
    return zero(order());
  }
  std::vector<Rational> out(coeffs_);
  for (auto& q : out) {
    q *= c;
  }
  return TruncatedLaurentSeries(lo_, std::move(out));
}

TruncatedLaurentSeries TruncatedLaurentSeries::shifted(int k) const {
  TruncatedLaurentSeries out = *this;
  out.lo_ += k;
  return out;
}

TruncatedLaurentSeries TruncatedLaurentSeries::reciprocal() const {
  if (is_zero()) {
    throw SeriesArithmeticError("division by a series with no nonzero coefficient");
  }
  const std::size_t len = coeffs_.size();
  std::vector<Rational> c(len);
  const Rational& b0 = coeffs_[0];
  c[0] = 1 / b0;
  for (std::size_t k = 1; k < len; ++k) {
    Rational acc(0);
    for (std::size_t i = 1; i <= k; ++i) {
      acc += coeffs_[i] * c[k - i];
    }
    c[k] = -acc / b0;
  }
  return TruncatedLaurentSeries(-lo_, std::move(c));
}

TruncatedLaurentSeries TruncatedLaurentSeries::pow(unsigned k) const {
  if (k == 0) {
    throw SeriesArithmeticError("pow: exponent must be >= 1");
  }
  TruncatedLaurentSeries out = *this;
  for (unsigned i = 1; i < k; ++i) {
    out = out * *this;
  }
  return out;
}

double TruncatedLaurentSeries::evaluate(double rho) const {
  double acc = 0.0;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    acc = acc * rho + coeffs_[i].get_d();
  }
  return acc * std::pow(rho, lo_);
}

std::vector<std::string> TruncatedLaurentSeries::fraction_strings() const {
  std::vector<std::string> out;
  out.reserve(coeffs_.size());
  for (const auto& q : coeffs_) {
    out.push_back(fraction_string(q));
  }
  return out;
}

TruncatedLaurentSeries operator+(const TruncatedLaurentSeries& a, const TruncatedLaurentSeries& b) {
  const int order = std::min(a.order(), b.order());
  const int lo = std::min(a.lo_, b.lo_);
  if (lo >= order) {
    return TruncatedLaurentSeries::zero(order);
  }
  std::vector<Rational> out(static_cast<std::size_t>(order - lo), Rational(0));
  for (int e = lo; e < order; ++e) {
    auto& slot = out[static_cast<std::size_t>(e - lo)];
    if (e >= a.lo_) {
      slot += a.coeffs_[static_cast<std::size_t>(e - a.lo_)];
    }
    if (e >= b.lo_) {
      slot += b.coeffs_[static_cast<std::size_t>(e - b.lo_)];
    }
  }
  return TruncatedLaurentSeries(lo, std::move(out));
}

TruncatedLaurentSeries operator-(const TruncatedLaurentSeries& a, const TruncatedLaurentSeries& b) {
  return a + (-b);
}

// (rho^va (a_0 + ... + O(rho^{Ka-va}))) (rho^vb (b_0 + ... + O(rho^{Kb-vb})))
// is known up to O(rho^{min(Ka + vb, Kb + va)}).
TruncatedLaurentSeries operator*(const TruncatedLaurentSeries& a, const TruncatedLaurentSeries& b) {
  const int va = a.valuation();
  const int vb = b.valuation();
  const int order = std::min(a.order() + vb, b.order() + va);
  const int lo = va + vb;
  if (lo >= order) {
    return TruncatedLaurentSeries::zero(order);
  }
  std::vector<Rational> out(static_cast<std::size_t>(order - lo), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size() && i + j < out.size(); ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return TruncatedLaurentSeries(lo, std::move(out));
}

TruncatedLaurentSeries operator/(const TruncatedLaurentSeries& a, const TruncatedLaurentSeries& b) {
  return a * b.reciprocal();
}

bool operator==(const TruncatedLaurentSeries& a, const TruncatedLaurentSeries& b) {
  return a.lo_ == b.lo_ && a.coeffs_ == b.coeffs_;
}

Rational NormalizedRadicalSeries::slope() const {
  if (tail.order() <= 1) {
    throw SeriesArithmeticError("radical series tail stops before the rho term");
  }
  return tail.coefficient(1);
}

TruncatedLaurentSeries NormalizedRadicalSeries::squared() const {
  return (tail * tail).scaled(radicand).shifted(2 * shift);
}

double NormalizedRadicalSeries::evaluate(double rho) const {
  return std::sqrt(radicand.get_d()) * std::pow(rho, shift) * tail.evaluate(rho);
}

NormalizedRadicalSeries sqrt_normalized(const TruncatedLaurentSeries& x) {
  if (x.is_zero()) {
    throw SeriesArithmeticError("sqrt_normalized: series vanishes on its window");
  }
  const int v = x.valuation();
  if (v % 2 != 0) {
    throw SeriesArithmeticError("sqrt_normalized: leading exponent " + std::to_string(v) +
                                " is odd");
  }
  const Rational c0 = x.leading();
  if (c0 <= 0) {
    throw SeriesArithmeticError("sqrt_normalized: leading coefficient is not positive");
  }
  const TruncatedLaurentSeries t = x.shifted(-v).scaled(1 / c0);
  const std::size_t len = static_cast<std::size_t>(t.order());
  // y^2 = t with y_0 = 1: y_k = (t_k - sum_{i=1}^{k-1} y_i y_{k-i}) / 2
  std::vector<Rational> y(len);
  y[0] = 1;
  for (std::size_t k = 1; k < len; ++k) {
    Rational acc = t.coefficient(static_cast<int>(k));
    for (std::size_t i = 1; i < k; ++i) {
      acc -= y[i] * y[k - i];
    }
    y[k] = acc / 2;
  }
  return NormalizedRadicalSeries{c0, v / 2, TruncatedLaurentSeries(0, std::move(y))};
}

TruncatedLaurentSeries expand_F(int order) {
  if (order < 0) {
    throw DomainError("expand_F: order must be >= 0");
  }
  // 1 - e^{-2 rho} = sum_{j>=1} -(-2)^j rho^j / j!, needed through rho^{order+1}.
  std::vector<Rational> den;
  Rational term(1);
  for (int j = 1; j <= order + 1; ++j) {
    term *= -2;
    term /= j;
    den.push_back(-term);
  }
  return TruncatedLaurentSeries(1, std::move(den)).reciprocal();
}

TruncatedLaurentSeries expand_s0(int n, int order) {
  if (n < 2) {
    throw DomainError("expand_s0: n must be >= 2");
  }
  // F^{n-1} loses one order per extra factor of the simple pole.
  const TruncatedLaurentSeries f = expand_F(std::max(0, order + n - 2));
  return f.pow(static_cast<unsigned>(n - 1)).truncated(order);
}

TruncatedLaurentSeries expand_sm(int n, int m, int order) {
  if (m < 0) {
    throw DomainError("expand_sm: m must be >= 0");
  }
  return expand_s_table(n, m, order).back();
}

std::vector<TruncatedLaurentSeries> expand_s_table(int n, int j_max, int top_order) {
  if (j_max < 0) {
    throw DomainError("expand_s_table: j_max must be >= 0");
  }
  std::vector<TruncatedLaurentSeries> out;
  out.reserve(static_cast<std::size_t>(j_max) + 1);
  out.push_back(expand_s0(n, top_order + j_max));
  const Rational minus_half(-1, 2);
  for (int j = 1; j <= j_max; ++j) {
    out.push_back(out.back().derivative().scaled(minus_half));
  }
  return out;
}

ABCSeries derive_ABC(int n, int m, int relative_terms) {
  if (n < 2) {
    throw DomainError("derive_ABC: n must be >= 2");
  }
  if (m < 1) {
    throw DomainError("derive_ABC: m must be >= 1");
  }
  if (relative_terms < 1) {
    throw DomainError("derive_ABC: relative_terms must be >= 1");
  }
  // S_j has its pole at rho^{-(n+j-1)}; choosing S_{2m+3} with order
  // -(n+2m+2) + relative_terms gives every S_j the same relative length.
  const int j_max = 2 * m + 3;
  const auto s = expand_s_table(n, j_max, -(n + 2 * m + 2) + relative_terms);
  const Rational inv_nm1(1, n - 1);
  ABCSeries out;
  out.A = s[2 * m + 1].scaled(2 * inv_nm1) + s[2 * m];
  out.B = TruncatedLaurentSeries::zero(s[m].order());
  for (int j = 0; j <= m; ++j) {
    const Rational weight(binomial(static_cast<unsigned long>(m), static_cast<unsigned long>(j)));
    out.B = out.B + (s[m + j + 1].scaled(inv_nm1) + s[m + j]).scaled(weight);
  }
  out.C = s[2 * m + 3].scaled(2 * inv_nm1) + s[2 * m + 2].scaled(Rational(3)) +
          s[2 * m + 1].scaled(Rational(n - 1));
  return out;
}

VarianceExpansions expand_variances(int n, int m, int extra_terms) {
  if (extra_terms < 0) {
    throw DomainError("expand_variances: extra_terms must be >= 0");
  }
  const int relative_terms = 4 + extra_terms;
  const ABCSeries abc = derive_ABC(n, m, relative_terms);
  const TruncatedLaurentSeries ratio =
      TruncatedLaurentSeries::exp_series(Rational(1), relative_terms) * abc.A /
      abc.B.scaled(Rational(2));
  const TruncatedLaurentSeries var_space =
      ratio * ratio - TruncatedLaurentSeries::constant(Rational(1), ratio.order());
  const TruncatedLaurentSeries var_momentum = abc.C / abc.A;
  const NormalizedRadicalSeries product = sqrt_normalized(var_space * var_momentum);
  return VarianceExpansions{var_space.truncated(4 + extra_terms),
                            var_momentum.truncated(extra_terms), product};
}

}  // namespace puw
