#pragma once

#include <cmath>

// Double-double helpers (Dekker / Knuth error-free transformations).
namespace puw::detail {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
  double value() const noexcept { return hi + lo; }
};

inline DoubleDouble two_sum(double a, double b) noexcept {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble quick_two_sum(double a, double b) noexcept {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) noexcept {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DoubleDouble dd_add(DoubleDouble a, DoubleDouble b) noexcept {
  DoubleDouble s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble dd_mul(DoubleDouble a, DoubleDouble b) noexcept {
  DoubleDouble p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble dd_div(DoubleDouble a, double b) noexcept {
  const double q1 = a.hi / b;
  const DoubleDouble p = two_prod(q1, b);
  const DoubleDouble r = dd_add(a, DoubleDouble{-p.hi, -p.lo});
  return quick_two_sum(q1, r.hi / b);
}

}  // namespace puw::detail
