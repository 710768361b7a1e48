#pragma once

// Extrapolated eigenvalues on unit-area rectangles, the analytic bounds they
// are compared against, the square-optimality sweep and the second-order
// perturbation report at the square.

#include <span>
#include <string>
#include <vector>

#include "magrect/eigensolve.hpp"
#include "magrect/lattice.hpp"

namespace magrect {

/// Two-grid eigenvalue: `grid` and its refinement (spacing halved).
struct LambdaSolve {
  double lambda = 0.0;  ///< Richardson value, order 2
  double coarse = 0.0;
  double fine = 0.0;
  double residual = 0.0;  ///< worst residual of the two solves
  int iterations = 0;     ///< total inverse applications
};

[[nodiscard]] LambdaSolve lambda1_solve(Aspect a, const FieldGauge& gauge, const GridSpec& grid,
                                        const SolverOptions& options = {});

/// Extrapolated lambda_1^B of the rectangle with sides a, 1/a.
[[nodiscard]] double lambda1(double a, double B, double theta, const GridSpec& grid,
                             double tol = 1e-9);

/// pi^2 (a^-2 + a^2) + c a^2 / (1 + a^4) B^2.
[[nodiscard]] double upper_bound_quadratic(double a, double B);

/// (a^-2 + a^2) nu(a^2 B / (1 + a^4)): product trial state with the gauge
/// split theta = a^4 / (1 + a^4).
[[nodiscard]] double upper_bound_nu(double a, double B, int resolution = 2048);

struct LowerBounds {
  double dia = 0.0;     ///< pi^2 (a^-2 + a^2), zero-field comparison
  double landau = 0.0;  ///< |B|, whole-plane comparison
  double strip = 0.0;   ///< max(a^-2 nu(a^2 B), a^2 nu(a^-2 B)), infinite strips

  [[nodiscard]] double best() const;
};

[[nodiscard]] LowerBounds lower_bounds(double a, double B, int resolution = 2048);

struct ScanRecord {
  double a = 0.0;
  double B = 0.0;
  double theta = 0.5;
  int n = 0;  ///< coarse grid points per axis; the fine grid has 2n + 1
  double lambda = 0.0;
  double lower_dia = 0.0;
  double lower_landau = 0.0;
  double lower_strip = 0.0;
  double upper_quad = 0.0;
  double upper_nu = 0.0;
  double margin = 0.0;  ///< lambda(a) - lambda(1) at the same B and grid
  bool in_theorem12_region = false;

  // solver metadata
  double tol = 0.0;
  int iterations = 0;
  double residual = 0.0;
  bool ok = true;
  std::string error;

  [[nodiscard]] double lower_best() const;
  [[nodiscard]] double upper_best() const;
  /// max(lower) - slack <= lambda <= min(upper) + slack.
  [[nodiscard]] bool sandwich_holds(double slack) const;
  /// The zero-field bound at a already exceeds the quadratic upper bound at
  /// the square, so margin >= 0 without an eigensolve.
  [[nodiscard]] bool certified_by_bounds() const;
};

struct ScanOptions {
  double tol = 1e-7;
  int jobs = 1;
  int nu_resolution = 2048;
  int max_iterations = 3000;
};

/// One record per (a, B), a-major in input order. A failing point is
/// recorded with ok = false and does not stop the sweep.
[[nodiscard]] std::vector<ScanRecord> scan_conjecture(std::span<const double> a_values,
                                                      std::span<const double> B_values,
                                                      double theta, const GridSpec& grid,
                                                      const ScanOptions& options = {});

struct DerivReport {
  double B = 0.0;
  double step = 0.0;
  double lambda_at_1 = 0.0;
  double first_derivative_fd = 0.0;
  double half_second_derivative_fd = 0.0;
  /// |difference| between the step and half-step second differences, halved.
  double fd_truncation_estimate = 0.0;
  double half_second_derivative_formula = 0.0;
  double udot_norm = 0.0;
  double eigen_gap = 0.0;
  bool simple = true;        ///< eigen_gap >= 10 * tol
  bool routes_agree = true;  ///< formula and finite differences within 1%
  std::vector<std::string> warnings;
};

/// Perturbation data at the square in the symmetric gauge. Finite
/// differences use steps `step` and `step / 2` (Richardson in the step) on
/// extrapolated eigenvalues; the formula route solves the first-order
/// equation for udot on both grids and extrapolates. Square grids only.
[[nodiscard]] DerivReport derivative_report(double B, const GridSpec& grid, double step = 0.02,
                                            double tol = 1e-9);

/// Half second derivative 2 lambda + lambda ||udot||^2 - ||d1 udot||^2 - ||d2 udot||^2
/// on a single grid, with udot from solve_deflated.
struct FormulaTerms {
  double lambda = 0.0;
  double half_second_derivative = 0.0;
  double udot_norm = 0.0;
  double first_derivative = 0.0;  ///< -2 ||d1 u||^2 + 2 ||d2 u||^2
};
[[nodiscard]] FormulaTerms second_derivative_formula(double B, const GridSpec& grid,
                                                     double tol = 1e-9);

/// Relative mismatch | ||d1 u|| - ||d2 u|| | / max of the two for the ground
/// state of the square in the symmetric gauge.
[[nodiscard]] double symmetry_check_square(double B, const GridSpec& grid, double tol = 1e-9);

/// lambda_2 - lambda_1 on the square (symmetric gauge) at the given grid.
[[nodiscard]] double eigen_gap_square(double B, const GridSpec& grid, double tol = 1e-9);

}  // namespace magrect
