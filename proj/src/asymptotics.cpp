#include "puw/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "puw/errors.hpp"
#include "puw/variance.hpp"
#include "puw/zonal.hpp"

namespace puw {

namespace {

void check_nm(int n, int m) {
  if (n < 2) {
    throw DomainError("n must be >= 2 (got " + std::to_string(n) + ")");
  }
  if (m < 1) {
    throw DomainError("m must be >= 1 (got " + std::to_string(m) + ")");
  }
}

void check_n_at_least(int n, int lowest, const char* what) {
  if (n < lowest) {
    throw DomainError(std::string(what) + ": requires n >= " + std::to_string(lowest));
  }
}

Rational fact(int k) {
  if (k < 0) {
    throw DomainError("factorial of a negative integer");
  }
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(k));
  return Rational(out);
}

Rational q(long num, long den = 1) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) {
    return std::nullopt;
  }
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class rn;
  mpz_class rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  Rational out(rn, rd);
  out.canonicalize();
  return out;
}

int sign_of(const Rational& x) { return sgn(x); }

void fill_momentum(ExpansionCase& c, int n, int m) {
  c.var_momentum_rho_m2 = q((n + 2L * m) * (n + 2L * m + 1), 4);
  c.var_momentum_rho_m1 = q((n - 1L) * m * (n + 2L * m), n + 2L * m - 1);
}

}  // namespace

std::string_view to_string(ExpansionCaseId id) noexcept {
  switch (id) {
    case ExpansionCaseId::general:
      return "general";
    case ExpansionCaseId::n4:
      return "n4";
    case ExpansionCaseId::n3:
      return "n3";
  }
  return "unknown";
}

ExpansionCaseId expansion_case_for(int n) noexcept {
  if (n == 3) {
    return ExpansionCaseId::n3;
  }
  if (n == 4) {
    return ExpansionCaseId::n4;
  }
  return ExpansionCaseId::general;
}

ExpansionCase general_case_expansion(int n, int m) {
  check_nm(n, m);
  const long N = n;
  const long M = m;
  const long s = N + 2 * M;  // n + 2m
  const long p = N * N - 3 * N + 2 * (M + 1);
  ExpansionCase c;
  c.case_id = ExpansionCaseId::general;
  c.var_space_rho2 = q(N * N - 3 * N + 2 * M + 2, (s - 1) * (s - 2));
  c.var_space_rho3 = -q(4 * (N - 1) * (N - 1) * (N - 3) * M, (s - 1) * (s - 1) * (s - 2) * (s - 3));
  fill_momentum(c, n, m);
  c.product_radicand = q(s * (s + 1) * p, 4 * (s - 1) * (s - 2));

  // U = U0 - K sqrt(Q) rho with U0 = sqrt(radicand); the slope of the
  // normalized tail is -K sqrt(Q / radicand), a rational number.
  const Rational k = q((N - 1) * M * (3 * N * N - 4 * N * (M + 3) - 4 * M * M + 8 * M + 9), s - 3);
  Rational qq(s);
  qq /= Rational(mpz_class(s + 1) * p * (s - 1) * (s - 1) * (s - 1) * (s - 2));
  const Rational slope_sq = k * k * qq / c.product_radicand;
  const auto root = exact_sqrt(slope_sq);
  if (!root) {
    throw std::logic_error("general-case U slope is not rational for n = " + std::to_string(n) +
                           ", m = " + std::to_string(m));
  }
  c.product_slope = sign_of(k) > 0 ? Rational(-*root) : *root;
  return c;
}

ExpansionCase theorem_expansion(int n, int m) {
  check_nm(n, m);
  const ExpansionCaseId id = expansion_case_for(n);
  if (id == ExpansionCaseId::general) {
    return general_case_expansion(n, m);
  }
  const long M = m;
  ExpansionCase c;
  c.case_id = id;
  fill_momentum(c, n, m);
  if (id == ExpansionCaseId::n4) {
    c.var_space_rho2 = q(M + 3, 2 * M * M + 5 * M + 3);
    c.var_space_rho3 =
        -q(2 * M * (4 * M * M + 2 * M + 21), 3 * (2 * M + 3) * (2 * M + 3) * (2 * M * M + 3 * M + 1));
    c.product_radicand = q((M + 3) * (M + 2) * (2 * M + 5), 2 * (M + 1) * (2 * M + 3));
    c.product_slope = -q(M * (8 * M * M * M - 12 * M * M - 74 * M + 51),
                         3 * (M + 3) * (2 * M + 1) * (2 * M + 3) * (2 * M + 5));
  } else {
    c.var_space_rho2 = q(1, 2 * M + 1);
    c.var_space_rho3 = -q(2 * (M - 1) * (M + 1) * (M + 5), 3 * (2 * M + 1));
    c.product_radicand = q((M + 2) * (2 * M + 3), 2 * (2 * M + 1));
    const long m2 = M * M;
    c.product_slope =
        -q(m2 * m2 * M + 8 * m2 * m2 + 16 * m2 * M + 2 * m2 - 20 * M - 10, 3 * (M + 1) * (M + 2));
  }
  return c;
}

std::array<Rational, 2> n2_direct_var_space(int m) {
  check_nm(2, m);
  const long M = m;
  return {q(1, 2 * M + 1), q(2, (2 * M - 1) * (2 * M + 1) * (2 * M + 1))};
}

std::array<Rational, 4> printed_s0_leading(int n) {
  check_n_at_least(n, 2, "printed_s0_leading");
  const Rational scale(1, mpz_class(1) << static_cast<unsigned>(n));
  const Rational nn(n);
  return {scale * 2, scale * 2 * (nn - 1), scale * (nn - 1) * (nn - q(4, 3)),
          scale * (nn - 1) * (nn - 1) * (nn - 2) / 3};
}

std::array<Rational, 4> printed_sm_leading(int n, int m) {
  check_n_at_least(n, 5, "printed_sm_leading");
  if (m < 0) {
    throw DomainError("printed_sm_leading: m must be >= 0");
  }
  const Rational scale(1, mpz_class(1) << static_cast<unsigned>(n + m));
  const Rational nn(n);
  return {scale * 2 * fact(n + m - 2) / fact(n - 2),
          scale * 2 * (nn - 1) * fact(n + m - 3) / fact(n - 3),
          scale * (nn - 1) * (nn - q(4, 3)) * fact(n + m - 4) / fact(n - 4),
          scale * (nn - 1) * (nn - 1) * (nn - 2) / 3 * fact(n + m - 5) / fact(n - 5)};
}

std::array<Rational, 4> printed_A(int n, int m) {
  check_n_at_least(n, 5, "printed_A");
  check_nm(n, m);
  const Rational nn(n);
  return {2 * fact(n + 2 * m - 1) / fact(n - 1),
          2 * (nn - 1) * fact(n + 2 * m - 2) / fact(n - 2),
          (nn * nn - q(7, 3) * nn + 2) * fact(n + 2 * m - 3) / fact(n - 3),
          (nn - 1) * (nn * nn - 3 * nn + 4) / 3 * fact(n + 2 * m - 4) / fact(n - 4)};
}

std::array<Rational, 4> printed_B(int n, int m) {
  check_n_at_least(n, 5, "printed_B");
  check_nm(n, m);
  const Rational x(n);
  const Rational y(m);
  const Rational x2 = x * x;
  const Rational x3 = x2 * x;
  const Rational x4 = x3 * x;
  const Rational x5 = x4 * x;
  const Rational x6 = x5 * x;
  const Rational b2 = x4 / 2 - q(5, 3) * x3 + (2 * y + q(3, 2)) * x2 - (6 * y + 1) * x / 3 +
                      2 * y * (y - 1);
  const Rational b3 = x6 / 6 - q(7, 6) * x5 + (y + q(17, 6)) * x4 - (20 * y + 17) * x3 / 6 +
                      (2 * y * y + y + 1) * x2 - q(2, 3) * (3 * y - 2) * y * x +
                      q(4, 3) * (y * y - 3 * y + 2) * y;
  const Rational denom = fact(n - 1);
  return {fact(n + 2 * m - 1) / denom, (x2 - x + 2 * y) * fact(n + 2 * m - 2) / denom,
          b2 * fact(n + 2 * m - 3) / denom, b3 * fact(n + 2 * m - 4) / denom};
}

std::array<Rational, 2> printed_C(int n, int m) {
  check_nm(n, m);
  return {2 * fact(n + 2 * m + 1) / fact(n - 1),
          2 * Rational(n + 1) * fact(n + 2 * m) / fact(n - 2)};
}

std::array<Rational, 2> printed_C_tail(int n, int m) {
  check_n_at_least(n, 5, "printed_C_tail");
  check_nm(n, m);
  const Rational x(n);
  return {x * (3 * x * x - x - 4) / 12 * fact(n + 2 * m - 1) / fact(n - 2),
          (x + 1) * x * (x - 1) * (x - 1) / 12 * fact(n + 2 * m - 2) / fact(n - 3)};
}

LimitValue limit_uncertainty(int n, int m) {
  check_nm(n, m);
  const long N = n;
  const long M = m;
  Rational radicand;
  switch (expansion_case_for(n)) {
    case ExpansionCaseId::general: {
      const long s = N + 2 * M;
      radicand = q(s * (s + 1) * (N * N - 3 * N + 2 * (M + 1)), 4 * (s - 1) * (s - 2));
      break;
    }
    case ExpansionCaseId::n4:
      radicand = q((M + 3) * (M + 2) * (2 * M + 5), 2 * (M + 1) * (2 * M + 3));
      break;
    case ExpansionCaseId::n3:
      radicand = q((M + 2) * (2 * M + 3), 2 * (2 * M + 1));
      break;
  }
  return LimitValue{radicand, std::sqrt(radicand.get_d())};
}

Rational f_function(int n, const Rational& m) {
  const Rational s = Rational(n) + 2 * m;
  const Rational den = (s - 1) * (s - 2);
  if (den == 0) {
    throw DomainError("F(m) has a pole at m = " + fraction_string(m));
  }
  const Rational nn(n);
  return s * (s + 1) * (nn * nn - 3 * nn + 2 * (m + 1)) / den;
}

double f_function(int n, double m) {
  const double s = n + 2.0 * m;
  const double den = (s - 1.0) * (s - 2.0);
  if (den == 0.0) {
    throw DomainError("F(m) has a pole");
  }
  return s * (s + 1.0) * (1.0 * n * n - 3.0 * n + 2.0 * (m + 1.0)) / den;
}

Rational f_prime_printed(int n, const Rational& m) {
  const Rational x(n);
  const Rational s = x + 2 * m;
  const Rational den = (s - 1) * (s - 1) * (s - 2) * (s - 2);
  if (den == 0) {
    throw DomainError("F'(m) has a pole at m = " + fraction_string(m));
  }
  const Rational m2 = m * m;
  const Rational numer = 16 * m2 * m2 + 16 * m2 * m * (2 * x - 3) +
                         4 * m2 * (2 * x * x - 2 * x - 5) -
                         4 * m * (2 * x * x * x - 9 * x * x + 13 * x - 6) -
                         (x - 2) * (x - 2) * (3 * x * x - 2 * x - 1);
  return 2 * numer / den;
}

double f_prime_printed(int n, double m) {
  const double x = n;
  const double s = x + 2.0 * m;
  const double den = (s - 1.0) * (s - 1.0) * (s - 2.0) * (s - 2.0);
  if (den == 0.0) {
    throw DomainError("F'(m) has a pole");
  }
  const double m2 = m * m;
  const double numer = 16.0 * m2 * m2 + 16.0 * m2 * m * (2.0 * x - 3.0) +
                       4.0 * m2 * (2.0 * x * x - 2.0 * x - 5.0) -
                       4.0 * m * (2.0 * x * x * x - 9.0 * x * x + 13.0 * x - 6.0) -
                       (x - 2.0) * (x - 2.0) * (3.0 * x * x - 2.0 * x - 1.0);
  return 2.0 * numer / den;
}

Rational f_prime_quotient_rule(int n, const Rational& m) {
  const Rational x(n);
  const Rational s = x + 2 * m;
  const Rational r = x * x - 3 * x + 2 * (m + 1);
  const Rational p = s * (s + 1) * r;
  const Rational dp = 2 * (s + 1) * r + 2 * s * r + 2 * s * (s + 1);
  const Rational qv = (s - 1) * (s - 2);
  const Rational dq = 2 * (s - 2) + 2 * (s - 1);
  if (qv == 0) {
    throw DomainError("F'(m) has a pole at m = " + fraction_string(m));
  }
  return (dp * qv - p * dq) / (qv * qv);
}

std::vector<SignProbe> f_sign_probes(int n) {
  check_n_at_least(n, 5, "f_sign_probes");
  const Rational x(n);
  const std::vector<std::pair<std::string, std::pair<Rational, int>>> table = {
      {"-3n/2", {-3 * x / 2, +1}},        {"-n/2-1", {-x / 2 - 1, -1}},
      {"-n/2", {-x / 2, +1}},             {"-n/2+3/4", {-x / 2 + q(3, 4), -1}},
      {"n/2-1", {x / 2 - 1, -1}},         {"n/2-1/2", {x / 2 - q(1, 2), +1}},
  };
  std::vector<SignProbe> out;
  for (const auto& [label, probe] : table) {
    Rational mm = probe.first;
    mm.canonicalize();
    out.push_back(SignProbe{label, mm, probe.second, sign_of(f_prime_printed(n, mm))});
  }
  return out;
}

OrderMinimum minimize_limit_over_order(int n) {
  check_nm(n, 1);
  OrderMinimum out;
  out.n = n;
  out.scan_limit = std::max(4 * n, 4);
  std::vector<Rational> values;
  values.reserve(static_cast<std::size_t>(out.scan_limit));
  for (int m = 1; m <= out.scan_limit; ++m) {
    values.push_back(limit_uncertainty(n, m).radicand);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) {
      best = i;
    }
  }
  out.m_star = static_cast<int>(best) + 1;
  out.radicand = values[best];
  out.min_value = std::sqrt(out.radicand.get_d());
  out.expected_m_star = n >= 5 ? (n - 1) / 2 : 1;
  out.matches_expected = out.m_star == out.expected_m_star;
  if (n >= 5) {
    const long N = n;
    out.closed_form_holds = 4 * out.radicand == q(N * (N - 1) * (2 * N - 1), 2 * N - 3);
    // Both integers bracketing the real minimiser in (n/2-1, n/2-1/2) must
    // not beat the scan result.
    for (int cand : {(n - 2) / 2, (n - 1) / 2, n / 2}) {
      if (cand >= 1 && limit_uncertainty(n, cand).radicand < out.radicand) {
        out.matches_expected = false;
      }
    }
  } else {
    out.closed_form_holds = true;
  }
  out.increasing_beyond = true;
  for (std::size_t i = best + 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      out.increasing_beyond = false;
    }
  }
  return out;
}

std::string_view to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::var_space:
      return "var_space";
    case Quantity::var_momentum:
      return "var_momentum";
    case Quantity::product:
      return "product";
  }
  return "unknown";
}

std::string_view to_string(ExpansionSource s) noexcept {
  return s == ExpansionSource::engine ? "engine" : "theorem";
}

double TwoTermExpansion::evaluate(double rho) const {
  const double a = first.get_d();
  const double b = second.get_d();
  switch (quantity) {
    case Quantity::var_space:
      return rho * rho * (a + b * rho);
    case Quantity::var_momentum:
      return (a + b * rho) / (rho * rho);
    case Quantity::product:
      return std::sqrt(a) * (1.0 + b * rho);
  }
  return 0.0;
}

TwoTermExpansion two_term_expansion(int n, int m, Quantity quantity, ExpansionSource source) {
  TwoTermExpansion out;
  out.quantity = quantity;
  if (source == ExpansionSource::theorem) {
    const ExpansionCase c = theorem_expansion(n, m);
    switch (quantity) {
      case Quantity::var_space:
        out.first = c.var_space_rho2;
        out.second = c.var_space_rho3;
        break;
      case Quantity::var_momentum:
        out.first = c.var_momentum_rho_m2;
        out.second = c.var_momentum_rho_m1;
        break;
      case Quantity::product:
        out.first = c.product_radicand;
        out.second = c.product_slope;
        break;
    }
    return out;
  }
  const VarianceExpansions e = expand_variances(n, m);
  switch (quantity) {
    case Quantity::var_space:
      out.first = e.var_space.coefficient(2);
      out.second = e.var_space.coefficient(3);
      break;
    case Quantity::var_momentum:
      out.first = e.var_momentum.coefficient(-2);
      out.second = e.var_momentum.coefficient(-1);
      break;
    case Quantity::product:
      if (e.product.shift != 0) {
        throw std::logic_error("uncertainty product expansion does not start at rho^0");
      }
      out.first = e.product.radicand;
      out.second = e.product.slope();
      break;
  }
  return out;
}

ResidualFit residual_order_check(int n, int m, Quantity quantity, std::span<const double> rho_grid,
                                 const SeriesTruncation& trunc, ExpansionSource source) {
  check_nm(n, m);
  if (rho_grid.size() < 2) {
    throw DomainError("residual_order_check: need at least two scales");
  }
  const TwoTermExpansion expansion = two_term_expansion(n, m, quantity, source);
  ResidualFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  int floor_points = 0;
  for (double rho : rho_grid) {
    const UncertaintyResult r = poisson_uncertainty_via_s(PoissonWaveletSpec::make(n, m, rho), trunc);
    const double numeric = quantity == Quantity::var_space      ? r.var_space
                           : quantity == Quantity::var_momentum ? r.var_momentum
                                                                : r.product;
    const double res = numeric - expansion.evaluate(rho);
    fit.rho.push_back(rho);
    fit.residual.push_back(res);
    // var_S carries an absolute rounding error of order eps (it is a square
    // minus one); the other two carry a relative one.
    const double floor_level = 1e-12 * std::max(1.0, std::abs(numeric));
    if (std::abs(res) <= floor_level) {
      ++floor_points;
      continue;
    }
    xs.push_back(std::log(rho));
    ys.push_back(std::log(std::abs(res)));
  }
  if (xs.size() < 2) {
    fit.floor_hit = true;
    fit.slope = std::numeric_limits<double>::infinity();
    fit.diagnostic = "residuals at rounding level on " + std::to_string(floor_points) +
                     " of " + std::to_string(rho_grid.size()) + " scales; check passes vacuously";
    return fit;
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  fit.slope = sxy / sxx;
  if (floor_points > 0) {
    fit.floor_hit = true;
    fit.diagnostic = std::to_string(floor_points) + " scale(s) at rounding level were dropped";
  }
  return fit;
}

std::vector<double> geometric_grid(double first, double ratio, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  double v = first;
  for (int k = 0; k < count; ++k) {
    out.push_back(v);
    v *= ratio;
  }
  return out;
}

}  // namespace puw
