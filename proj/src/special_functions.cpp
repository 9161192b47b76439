#include "puw/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "puw/detail/double_double.hpp"
#include "puw/errors.hpp"

namespace puw {

SmallRational SmallRational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw DomainError("SmallRational: zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return SmallRational{num / g, den / g};
}

SphereDim::SphereDim(int n) : n_(n) {
  if (n < 2) {
    throw DomainError("n must be >= 2 (got " + std::to_string(n) + ")");
  }
  lambda_ = SmallRational::make(n - 1, 2);
  surface_ = surface_measure(n);
}

namespace {

void check_gegenbauer_args(int l, SmallRational lambda, double t) {
  if (l < 0) {
    throw DomainError("gegenbauer: negative degree");
  }
  if (lambda.num <= 0) {
    throw DomainError("gegenbauer: lambda must be positive");
  }
  if (!(t >= -1.0 && t <= 1.0)) {
    throw DomainError("gegenbauer: argument outside [-1, 1]");
  }
}

}  // namespace

double gegenbauer_eval(int l, SmallRational lambda, double t) {
  check_gegenbauer_args(l, lambda, t);
  const double lam = lambda.value();
  if (l == 0) {
    return 1.0;
  }
  double prev = 1.0;
  double cur = 2.0 * lam * t;
  for (int k = 2; k <= l; ++k) {
    const double kk = k;
    const double next = (2.0 * (kk + lam - 1.0) * t * cur - (kk + 2.0 * lam - 2.0) * prev) / kk;
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_eval_compensated(int l, SmallRational lambda, double t) {
  using namespace detail;
  check_gegenbauer_args(l, lambda, t);
  if (l == 0) {
    return 1.0;
  }
  // 2*lambda and k+lambda-1 are exact in double for half-integer lambda;
  // for general rationals they carry one rounding, as in the plain variant.
  const double lam = lambda.value();
  DoubleDouble prev{1.0, 0.0};
  DoubleDouble cur = two_prod(2.0 * lam, t);
  for (int k = 2; k <= l; ++k) {
    const double kk = k;
    const DoubleDouble a = two_prod(2.0 * (kk + lam - 1.0), t);
    const DoubleDouble b{-(kk + 2.0 * lam - 2.0), 0.0};
    const DoubleDouble next = dd_div(dd_add(dd_mul(a, cur), dd_mul(b, prev)), kk);
    prev = cur;
    cur = next;
  }
  return cur.hi + cur.lo;
}

mpz_class binomial(unsigned long a, unsigned long b) {
  if (b > a) {
    return 0;
  }
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), a, b);
  return out;
}

double gamma_half_integer(SmallRational x) {
  if (x.num <= 0 || (x.den != 1 && x.den != 2)) {
    throw DomainError("gamma_half_integer: argument must be a positive integer or half-integer");
  }
  if (x.den == 1) {
    // Gamma(k) = (k-1)!
    double f = 1.0;
    for (std::int64_t j = 2; j < x.num; ++j) {
      f *= static_cast<double>(j);
    }
    return f;
  }
  // x = k + 1/2: Gamma(k + 1/2) = sqrt(pi) * (2k-1)!! / 2^k
  const std::int64_t k = (x.num - 1) / 2;
  double g = std::sqrt(std::numbers::pi);
  for (std::int64_t j = 1; j <= k; ++j) {
    g *= (static_cast<double>(j) - 0.5);
  }
  return g;
}

double surface_measure(int n) {
  if (n < 2) {
    throw DomainError("surface_measure: n must be >= 2 (got " + std::to_string(n) + ")");
  }
  // lambda + 1 = (n+1)/2
  const SmallRational lambda_plus_one = SmallRational::make(n + 1, 2);
  return 2.0 * std::pow(std::numbers::pi, lambda_plus_one.value()) / gamma_half_integer(lambda_plus_one);
}

}  // namespace puw
