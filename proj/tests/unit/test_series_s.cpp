#include <cmath>
#include <numbers>

#include "doctest.h"
#include "puw/errors.hpp"
#include "puw/report.hpp"
#include "puw/series_s.hpp"
#include "puw/special_functions.hpp"

using namespace puw;

namespace {

double rel(double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

const SeriesTruncation kTrunc{};

}  // namespace

TEST_CASE("closed-form and geometric-series spot values") {
  CHECK(s_m_eval(3, 0, std::numbers::ln2 / 2, kTrunc).value == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(s_m_eval(3, 0, 0.3, kTrunc).closed_form);

  const double q = std::exp(-1.0);
  CHECK(rel(s_m_eval(2, 1, 0.5, kTrunc).value, q / ((1 - q) * (1 - q))) <= 1e-14);
  CHECK(s_m_eval(2, 1, 0.5, kTrunc).value == doctest::Approx(0.920674).epsilon(1e-6));
  CHECK(rel(s_m_eval(2, 0, 0.5, kTrunc).value, 1 / (1 - q)) <= 1e-15);
  CHECK(rel(s_m_sum(2, 0, 0.5, kTrunc).value, 1 / (1 - q)) <= 1e-14);

  // n = 3: sum (l + 1) l q^l = 2 q / (1 - q)^3
  for (double rho : {0.05, 0.4, 2.0}) {
    const double qq = std::exp(-2 * rho);
    CHECK(rel(s_m_eval(3, 1, rho, kTrunc).value, 2 * qq / std::pow(1 - qq, 3)) <= 1e-13);
  }
}

TEST_CASE("direct summation of S_0 matches the closed form") {
  for (int n = 2; n <= 8; ++n) {
    for (double rho : {0.01, 0.1, 1.0, 5.0}) {
      CHECK(rel(s_m_sum(n, 0, rho, kTrunc).value, s_zero_closed_form(n, rho)) <= 1e-13);
    }
  }
}

TEST_CASE("S_{m+1} = -S_m' / 2 against a five-point difference") {
  for (int n : {2, 3, 5}) {
    for (int m : {0, 1, 2}) {
      for (double rho : {0.1, 0.5}) {
        const double fd = -0.5 * s_m_five_point_derivative(n, m, rho, 1e-4 * rho);
        CHECK(rel(s_m_eval(n, m + 1, rho, kTrunc).value, fd) <= 1e-6);
      }
    }
  }
}

TEST_CASE("S_m is strictly decreasing in rho") {
  for (int n : {2, 4, 7}) {
    for (int m : {0, 1, 3}) {
      double prev = s_m_eval(n, m, 0.02, kTrunc).value;
      for (double rho = 0.03; rho < 4.0; rho *= 1.5) {
        const double cur = s_m_eval(n, m, rho, kTrunc).value;
        CHECK(cur < prev);
        prev = cur;
      }
    }
  }
}

TEST_CASE("leading blow-up of S_m") {
  for (int n : {5, 6}) {
    for (int m : {1, 2}) {
      const double rho = 1e-3;
      // (n+m-2)! / (2^{n+m-1} (n-2)!)
      const double lead = std::tgamma(n + m - 1.0) / (std::pow(2.0, n + m - 1) * std::tgamma(n - 1.0));
      CHECK(rel(std::pow(rho, n + m - 1) * s_m_eval(n, m, rho, kTrunc).value, lead) <= 2e-2);
    }
  }
}

TEST_CASE("series errors") {
  CHECK_THROWS_AS(s_m_eval(3, 1, 0.0, kTrunc), DomainError);
  CHECK_THROWS_AS(s_m_eval(3, 1, -1.0, kTrunc), DomainError);
  CHECK_THROWS_AS(s_m_eval(3, -1, 1.0, kTrunc), DomainError);
  CHECK_THROWS_AS(s_m_eval(1, 1, 1.0, kTrunc), DomainError);
  SeriesTruncation tight;
  tight.max_terms = 100;
  CHECK_THROWS_AS(s_m_sum(4, 2, 0.01, tight), TruncationError);
  try {
    s_m_sum(4, 2, 0.01, tight);
  } catch (const TruncationError& e) {
    CHECK(e.terms_used() == 100);
  }
}

TEST_CASE("truncation policy validation") {
  SeriesTruncation t;
  CHECK_NOTHROW(t.validate());
  t.rel_tol = 1e-3;
  CHECK_THROWS_AS(t.validate(), DomainError);
  t.rel_tol = 0.0;
  CHECK_THROWS_AS(t.validate(), DomainError);
  t = SeriesTruncation{};
  t.min_terms = 0;
  CHECK_THROWS_AS(t.validate(), DomainError);
  t = SeriesTruncation{};
  t.max_terms = 10;
  CHECK_THROWS_AS(t.validate(), DomainError);
}

TEST_CASE("compensated sum recovers cancelled small terms") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) {
    s.add(1e-17);
  }
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-6));
}
