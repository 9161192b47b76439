#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace puw {

/// Result of the full verification run. `json` holds one object per section,
/// each with its own "passed" flag; `failures` names every mandatory check
/// that did not hold and `warnings` lists flagged printed-formula typos.
struct VerifyReport {
  nlohmann::ordered_json json;
  bool passed = false;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

/// Runs every check on its fixed grid with pinned tolerances. Deterministic:
/// no timing or environment data enters the report.
VerifyReport build_verify_report();

// Grid and tolerance constants shared with the acceptance suite.
namespace verify_grid {
inline constexpr int appendix_n_min = 5;
inline constexpr int appendix_n_max = 10;
inline constexpr int appendix_c_n_min = 3;
inline constexpr int m_max = 4;
inline constexpr int theorem_n_min = 2;
inline constexpr int theorem_n_max = 10;

inline const std::vector<int> path_n{2, 3, 4, 5, 8};
inline const std::vector<int> path_m{1, 2, 3};
inline const std::vector<double> path_rho{0.02, 0.05, 0.1, 0.5, 1.0};
inline constexpr double path_rel_tol = 1e-9;

inline const std::vector<int> residual_n{2, 3, 4, 5, 7};
inline const std::vector<int> residual_m{1, 2, 3};
inline constexpr double residual_rho_first = 0.1;
inline constexpr double residual_rho_ratio = 0.5;
inline constexpr int residual_rho_count = 5;
inline constexpr double residual_min_slope_space = 3.5;
inline constexpr double residual_min_slope_product = 1.9;
inline constexpr double residual_min_slope_momentum = -0.1;

inline constexpr double bound_rel_slack = 1e-9;

inline constexpr double limit_rho = 1e-3;
inline constexpr double limit_rel_tol = 5e-3;

inline constexpr int minimization_n_min = 5;
inline constexpr int minimization_n_max = 40;

inline constexpr double s0_rel_tol = 1e-13;
inline const std::vector<double> s0_rho{0.01, 0.1, 1.0, 5.0};
inline constexpr double derivative_rel_tol = 1e-6;
inline constexpr double gegenbauer_rel_tol = 1e-12;

inline const std::vector<int> kernel_n{2, 3, 4};
inline const std::vector<double> kernel_rho{0.1, 0.2, 0.5, 1.0, 2.0};
inline constexpr int kernel_theta_points = 25;
inline constexpr double kernel_rel_tol = 1e-10;
inline const std::vector<double> quadrature_rho{0.2, 0.5, 1.0};
inline constexpr double quadrature_abs_tol = 1e-8;
}  // namespace verify_grid

/// Five-point central difference of S_m at rho with step h.
double s_m_five_point_derivative(int n, int m, double rho, double h);

/// Sigma_{n-1} * int_0^pi p_rho(theta) sin^{n-1}(theta) dtheta by adaptive
/// Gauss-Kronrod quadrature.
double poisson_kernel_mass(int n, double rho);

}  // namespace puw
