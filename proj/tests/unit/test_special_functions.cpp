#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "puw/errors.hpp"
#include "puw/special_functions.hpp"

using namespace puw;

namespace {

const SmallRational kHalf{1, 2};
const SmallRational kOne{1, 1};

double rel(double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("gegenbauer low degrees") {
  CHECK(gegenbauer_eval(0, kOne, 0.3) == 1.0);
  CHECK(gegenbauer_eval(1, kOne, 0.5) == doctest::Approx(1.0));
  CHECK(std::abs(gegenbauer_eval(2, kOne, 0.5)) < 1e-15);
}

TEST_CASE("lambda = 1 reproduces Chebyshev polynomials of the second kind") {
  for (double phi : {0.1, 0.7, 1.3, 2.0, 2.9}) {
    for (int l = 0; l <= 40; ++l) {
      const double oracle = std::sin((l + 1) * phi) / std::sin(phi);
      CHECK(std::abs(gegenbauer_eval(l, kOne, std::cos(phi)) - oracle) <= 1e-12 * (l + 1));
    }
  }
}

TEST_CASE("lambda = 1/2 reproduces Legendre polynomials") {
  for (int i = 0; i <= 200; ++i) {
    const double t = -1.0 + i / 100.0;
    CHECK(std::abs(gegenbauer_eval(2, kHalf, t) - (3 * t * t - 1) / 2) <= 1e-14);
    CHECK(std::abs(gegenbauer_eval(3, kHalf, t) - (5 * t * t * t - 3 * t) / 2) <= 1e-14);
  }
}

TEST_CASE("value at t = 1 is the binomial coefficient") {
  for (int twice = 1; twice <= 5; ++twice) {
    const SmallRational lambda = SmallRational::make(twice, 2);
    for (int l = 0; l <= 100; ++l) {
      const double exact = binomial(l + twice - 1, l).get_d();
      CHECK(rel(gegenbauer_eval(l, lambda, 1.0), exact) <= 1e-12);
    }
  }
}

TEST_CASE("bounded by the value at t = 1") {
  for (int twice = 1; twice <= 5; ++twice) {
    const SmallRational lambda = SmallRational::make(twice, 2);
    for (int l : {1, 2, 5, 17, 60}) {
      const double top = gegenbauer_eval(l, lambda, 1.0);
      for (int i = 0; i <= 1000; ++i) {
        const double t = -1.0 + i / 500.0;
        CHECK(std::abs(gegenbauer_eval(l, lambda, t)) <= top * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("compensated recurrence at high degree") {
  const double phi = 0.9;
  for (int l : {600, 1500, 4000}) {
    const double oracle = std::sin((l + 1) * phi) / std::sin(phi);
    const double plain = gegenbauer_eval(l, kOne, std::cos(phi));
    const double comp = gegenbauer_eval_compensated(l, kOne, std::cos(phi));
    CHECK(std::abs(comp - oracle) <= std::abs(plain - oracle) + 1e-13);
    CHECK(std::abs(comp - oracle) <= 1e-10);
  }
  CHECK(gegenbauer_eval_compensated(0, kHalf, 0.2) == 1.0);
}

TEST_CASE("gegenbauer domain errors") {
  CHECK_THROWS_AS(gegenbauer_eval(2, kOne, 1.5), DomainError);
  CHECK_THROWS_AS(gegenbauer_eval(2, kOne, -1.0001), DomainError);
  CHECK_THROWS_AS(gegenbauer_eval(2, SmallRational{0, 1}, 0.0), DomainError);
  CHECK_THROWS_AS(gegenbauer_eval(-1, kOne, 0.0), DomainError);
  CHECK_THROWS_AS(gegenbauer_eval(2, kOne, std::nan("")), DomainError);
}

TEST_CASE("binomial against the Pascal triangle") {
  std::vector<std::vector<mpz_class>> rows{{1}};
  for (int a = 1; a <= 60; ++a) {
    std::vector<mpz_class> row(a + 1);
    row[0] = row[a] = 1;
    for (int b = 1; b < a; ++b) {
      row[b] = rows[a - 1][b - 1] + rows[a - 1][b];
    }
    rows.push_back(std::move(row));
  }
  for (int a = 0; a <= 60; ++a) {
    for (int b = 0; b <= a; ++b) {
      CHECK(binomial(a, b) == rows[a][b]);
    }
  }
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(52, 50) == 1326);
  CHECK(binomial(3, 7) == 0);
  for (unsigned long l : {0UL, 1UL, 9UL, 500UL}) {
    CHECK(binomial(l, l) == 1);
  }
  CHECK(binomial(10000, 3) == mpz_class(10000) * 9999 * 9998 / 6);
  CHECK(binomial(10000, 5000) == binomial(10000, 5000 - 1) * 5001 / 5000);
}

TEST_CASE("surface measure") {
  CHECK(surface_measure(2) == doctest::Approx(4 * std::numbers::pi).epsilon(1e-15));
  CHECK(surface_measure(3) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi).epsilon(1e-15));
  CHECK(surface_measure(5) == doctest::Approx(std::pow(std::numbers::pi, 3)).epsilon(1e-15));
  for (int n = 2; n <= 14; ++n) {
    const double oracle = 2 * std::pow(std::numbers::pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0);
    CHECK(rel(surface_measure(n), oracle) <= 1e-13);
  }
  CHECK_THROWS_AS(surface_measure(1), DomainError);
}

TEST_CASE("sphere dimension") {
  const SphereDim d(4);
  CHECK(d.lambda() == SmallRational{3, 2});
  CHECK(d.surface() == surface_measure(4));
  CHECK(SphereDim(3).lambda() == SmallRational{1, 1});
  CHECK_THROWS_AS(SphereDim(1), DomainError);
  CHECK(SmallRational::make(6, -4) == SmallRational{-3, 2});
}
