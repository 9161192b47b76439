#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "puw/laurent.hpp"
#include "puw/summation.hpp"

namespace puw {

// ---------------------------------------------------------------------------
// Printed small-scale expansions of the Poisson wavelet uncertainty, kept as
// exact rationals in (n, m). Nothing here is derived: these are the formulas
// the laurent engine is checked against.
// ---------------------------------------------------------------------------

enum class ExpansionCaseId { general, n4, n3 };

std::string_view to_string(ExpansionCaseId id) noexcept;

/// n = 3 -> n3, n = 4 -> n4, otherwise general (n >= 5 and n = 2).
ExpansionCaseId expansion_case_for(int n) noexcept;

/// var_S = s2 rho^2 + s3 rho^3 + O(rho^4),
/// var_M = v2 rho^-2 + v1 rho^-1 + O(1),
/// U     = sqrt(u_radicand) (1 + u_slope rho) + O(rho^2).
struct ExpansionCase {
  ExpansionCaseId case_id = ExpansionCaseId::general;
  Rational var_space_rho2;
  Rational var_space_rho3;
  Rational var_momentum_rho_m2;
  Rational var_momentum_rho_m1;
  Rational product_radicand;
  Rational product_slope;
};

/// Case-split closed forms; n >= 2, m >= 1.
ExpansionCase theorem_expansion(int n, int m);

/// The general-case formulas evaluated at any n >= 2 (no case split).
ExpansionCase general_case_expansion(int n, int m);

/// var_S coefficients (rho^2, rho^3) from the dedicated n = 2 computation:
/// 1/(2m+1) and 2/((2m-1)(2m+1)^2).
std::array<Rational, 2> n2_direct_var_space(int m);

/// Leading four coefficients of S_0 (exponents -(n-1) .. -(n-4)).
std::array<Rational, 4> printed_s0_leading(int n);
/// Leading four coefficients of S_m for n >= 5 (exponents -(n+m-1) .. -(n+m-4)).
std::array<Rational, 4> printed_sm_leading(int n, int m);
/// Leading four coefficients of 2^{n+2m} A, n >= 5.
std::array<Rational, 4> printed_A(int n, int m);
/// Leading four coefficients of 2^{n+2m} B, n >= 5.
std::array<Rational, 4> printed_B(int n, int m);
/// Leading two coefficients of 2^{n+2m+2} C, n >= 2.
std::array<Rational, 2> printed_C(int n, int m);
/// Third and fourth coefficients of 2^{n+2m} C from the longer derivation, n >= 5.
std::array<Rational, 2> printed_C_tail(int n, int m);

// ---------------------------------------------------------------------------
// Limit of the uncertainty product and its minimisation over the order m.
// ---------------------------------------------------------------------------

struct LimitValue {
  /// U_inf^2, exact.
  Rational radicand;
  double value = 0.0;
};

/// lim_{rho -> 0} U(g_rho^m); n >= 2, m >= 1.
LimitValue limit_uncertainty(int n, int m);

/// F(m) = (n+2m)(n+2m+1)(n^2-3n+2(m+1)) / ((n+2m-1)(n+2m-2)), so that
/// U_inf = sqrt(F(m)) / 2. Throws DomainError at the poles m = (1-n)/2 and
/// m = (2-n)/2.
Rational f_function(int n, const Rational& m);
double f_function(int n, double m);

/// F'(m) as printed (quartic numerator over squared denominator).
Rational f_prime_printed(int n, const Rational& m);
double f_prime_printed(int n, double m);

/// F'(m) by the quotient rule applied to the factored form of F.
Rational f_prime_quotient_rule(int n, const Rational& m);

struct SignProbe {
  std::string label;
  Rational m;
  int expected_sign = 0;
  int observed_sign = 0;
  bool ok() const noexcept { return expected_sign == observed_sign; }
};

/// The six sign checks of F' that locate its roots: m = -3n/2, -n/2-1, -n/2,
/// -n/2+3/4, n/2-1, n/2-1/2. n >= 5.
std::vector<SignProbe> f_sign_probes(int n);

struct OrderMinimum {
  int n = 0;
  int m_star = 0;
  double min_value = 0.0;
  Rational radicand;
  int scan_limit = 0;
  /// floor((n-1)/2) for n >= 5, 1 for n in {2, 3, 4}.
  int expected_m_star = 0;
  bool matches_expected = false;
  /// 4 U_inf^2 == n(n-1)(2n-1)/(2n-3) (checked for n >= 5, true otherwise).
  bool closed_form_holds = false;
  /// U_inf strictly increasing in m on [m_star, scan_limit].
  bool increasing_beyond = false;
};

/// Exhaustive scan of limit_uncertainty(n, m) over m = 1 .. 4n.
OrderMinimum minimize_limit_over_order(int n);

// ---------------------------------------------------------------------------
// Remainder-order checks: numeric values against two-term expansions.
// ---------------------------------------------------------------------------

enum class Quantity { var_space, var_momentum, product };
enum class ExpansionSource { engine, theorem };

std::string_view to_string(Quantity q) noexcept;
std::string_view to_string(ExpansionSource s) noexcept;

/// Two-term truncation of one of the three expansions.
struct TwoTermExpansion {
  Quantity quantity = Quantity::var_space;
  Rational first;
  Rational second;
  double evaluate(double rho) const;
};

TwoTermExpansion two_term_expansion(int n, int m, Quantity q, ExpansionSource source);

struct ResidualFit {
  double slope = 0.0;
  std::vector<double> rho;
  std::vector<double> residual;
  /// Residuals too close to rounding level to carry information; the check
  /// is then reported as vacuously passing.
  bool floor_hit = false;
  std::string diagnostic;
};

/// Least-squares slope of log|numeric - two-term expansion| against log rho.
/// Numeric values come from the S-series path.
ResidualFit residual_order_check(int n, int m, Quantity q, std::span<const double> rho_grid,
                                 const SeriesTruncation& trunc,
                                 ExpansionSource source = ExpansionSource::engine);

/// first * ratio^k, k = 0 .. count-1.
std::vector<double> geometric_grid(double first, double ratio, int count);

}  // namespace puw
