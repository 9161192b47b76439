#include <cmath>
#include <numbers>

#include "doctest.h"
#include "puw/errors.hpp"
#include "puw/report.hpp"
#include "puw/zonal.hpp"

using namespace puw;

namespace {

double rel(double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

const SeriesTruncation kTrunc{};

}  // namespace

TEST_CASE("wavelet coefficients") {
  const ZonalFunction g = poisson_wavelet_coefficients(PoissonWaveletSpec::make(3, 1, 1.0));
  CHECK(g.coeff(0) == 0.0);
  const double oracle = 2.0 * std::exp(-1.0) / (2 * std::numbers::pi * std::numbers::pi);
  CHECK(rel(g.coeff(1), oracle) <= 1e-14);
  CHECK(g.coeff(1) == doctest::Approx(0.0372740).epsilon(1e-6));
}

TEST_CASE("rescaled wavelet coefficients") {
  for (int n : {2, 3, 6}) {
    for (int m : {1, 2, 4}) {
      const auto spec = PoissonWaveletSpec::make(n, m, 0.3);
      const ZonalFunction f = rescaled_poisson_wavelet_coefficients(spec);
      const double lam = (n - 1) / 2.0;
      for (int l = 0; l <= 200; ++l) {
        const double oracle = (l + lam) / lam * std::pow(l, m) * std::exp(-0.3 * l);
        CHECK(rel(f.coeff(l), oracle) <= 1e-13);
      }
    }
  }
}

TEST_CASE("order recursion multiplies coefficient l by rho l") {
  for (double rho : {0.05, 0.7}) {
    for (int m = 1; m <= 4; ++m) {
      const ZonalFunction g = poisson_wavelet_coefficients(PoissonWaveletSpec::make(4, m, rho));
      const ZonalFunction g1 = poisson_wavelet_coefficients(PoissonWaveletSpec::make(4, m + 1, rho));
      for (int l = 0; l <= 200; ++l) {
        CHECK(rel(g1.coeff(l), rho * l * g.coeff(l)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(PoissonWaveletSpec::make(3, 0, 0.5), DomainError);
  CHECK_THROWS_AS(PoissonWaveletSpec::make(3, 1, 0.0), DomainError);
  CHECK_THROWS_AS(PoissonWaveletSpec::make(1, 1, 0.5), DomainError);
  const auto spec = PoissonWaveletSpec::make(3, 2, 0.25);
  CHECK(spec.r == std::exp(-0.25));
}

TEST_CASE("poisson kernel closed form") {
  const SphereDim two(2);
  for (double theta : {0.0, 1.0, std::numbers::pi}) {
    CHECK(rel(poisson_kernel_eval(two, 50.0, theta), 1.0 / (4 * std::numbers::pi)) <= 1e-15);
  }
  // sum_l (2l + 1) r^l = (1 + r) / (1 - r)^2, summed directly.
  const double r = std::exp(-0.5);
  double s = 0.0;
  double rl = 1.0;
  for (int l = 0; l < 400; ++l) {
    s += (2 * l + 1) * rl;
    rl *= r;
  }
  const double expected = s / (4 * std::numbers::pi);
  CHECK(rel(poisson_kernel_eval(two, 0.5, 0.0), expected) <= 1e-13);
  CHECK(poisson_kernel_eval(two, 0.5, 0.0) == doctest::Approx(0.8258).epsilon(1e-4));
  CHECK_THROWS_AS(poisson_kernel_eval(two, 0.5, -0.1), DomainError);
  CHECK_THROWS_AS(poisson_kernel_eval(two, 0.5, 3.2), DomainError);
  CHECK_THROWS_AS(poisson_kernel_eval(two, -0.5, 1.0), DomainError);
}

TEST_CASE("poisson kernel series matches the closed form") {
  const SphereDim two(2);
  const ZonalFunction k = poisson_kernel_coefficients(two, 0.5);
  CHECK(rel(zonal_eval(k, std::numbers::pi / 3, kTrunc).value,
            poisson_kernel_eval(two, 0.5, std::numbers::pi / 3)) <= 1e-10);
  for (int n : {2, 3, 4}) {
    const SphereDim dim(n);
    for (double rho : {0.1, 0.3, 1.0}) {
      const ZonalFunction kn = poisson_kernel_coefficients(dim, rho);
      for (int i = 0; i < 25; ++i) {
        const double theta = std::numbers::pi * i / 24;
        const double closed = poisson_kernel_eval(dim, rho, theta);
        CHECK(closed > 0.0);
        CHECK(rel(zonal_eval(kn, theta, kTrunc).value, closed) <= 1e-10);
      }
    }
  }
}

TEST_CASE("poisson kernel has unit mass") {
  for (int n : {2, 3, 5}) {
    for (double rho : {0.2, 0.5, 1.0}) {
      CHECK(std::abs(poisson_kernel_mass(n, rho) - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("zonal evaluation basics") {
  const ZonalFunction one{SphereDim(3), [](std::int64_t l) { return l == 0 ? 1.0 : 0.0; }, "one", 0.0};
  for (double theta : {0.0, 0.4, 2.0, std::numbers::pi}) {
    CHECK(zonal_eval(one, theta, kTrunc).value == 1.0);
  }
  CHECK_THROWS_AS(zonal_eval(one, -0.1, kTrunc), DomainError);

  const ZonalFunction flat{SphereDim(3), [](std::int64_t) { return 1.0; }, "flat", 0.0};
  SeriesTruncation tight;
  tight.max_terms = 500;
  CHECK_THROWS_AS(zonal_eval(flat, 1.0, tight), TruncationError);
}

TEST_CASE("next wavelet order evaluates as rho l times the coefficients") {
  const double rho = 0.4;
  const auto g = poisson_wavelet_coefficients(PoissonWaveletSpec::make(3, 2, rho));
  const auto g1 = poisson_wavelet_coefficients(PoissonWaveletSpec::make(3, 3, rho));
  ZonalFunction manual{g.dim, [&](std::int64_t l) { return rho * static_cast<double>(l) * g.coeff(l); }, "manual",
                       g1.peak_degree};
  for (double theta : {0.0, 0.3, 1.2, 2.5}) {
    const double a = zonal_eval(g1, theta, kTrunc).value;
    const double b = zonal_eval(manual, theta, kTrunc).value;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("scaled zonal function") {
  const auto g = poisson_wavelet_coefficients(PoissonWaveletSpec::make(3, 1, 0.5));
  const auto h = g.scaled(-2.5);
  for (int l = 0; l < 20; ++l) {
    CHECK(h.coeff(l) == -2.5 * g.coeff(l));
  }
}
