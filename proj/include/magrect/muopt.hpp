#pragma once

// Minimisation of J[u] = 2 ||d1^A u|| ||d2^A u|| / ||u||^2 on the unit square.
//
// J[u] = min over alpha > 0 of alpha^-2 ||d1^A u||^2 + alpha^2 ||d2^A u||^2
// (equality at alpha^2 = ||d1^A u|| / ||d2^A u||), so alternating between the
// anisotropic ground state at fixed alpha and the alpha update never increases
// J. The infimum mu bounds lambda_1^B from below for every unit-area rectangle.

#include <stdexcept>
#include <string>
#include <vector>

#include "magrect/lattice.hpp"

namespace magrect {

struct RestartResult {
  double alpha_seed = 1.0;
  int phase_seed = 0;
  double mu = 0.0;
  double alpha = 1.0;
  int iterations = 0;
  std::vector<double> objective_trace;
  bool converged = false;
  std::string error;
};

struct MuResult {
  double mu = 0.0;
  double alpha = 1.0;
  int iterations = 0;
  std::vector<double> objective_trace;
  double symmetry_residual = 0.0;
  bool converged = false;
  int restarts = 0;
  /// (max - min) / min of mu over converged restarts.
  double restart_spread = 0.0;
  std::vector<RestartResult> runs;
  ComplexVector minimiser;
};

struct MuOptions {
  double tol = 1e-8;  ///< relative objective change, two consecutive steps
  int max_outer = 200;
  std::vector<double> alpha_seeds{0.5, 1.0, 2.0};
  int phase_seeds = 2;
  double solver_tol = 1e-9;
  bool concurrent = true;
};

/// Thrown when a covariant derivative of the current state vanishes.
class DegenerateNormError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] MuResult minimize_J(double B, double theta, const GridSpec& grid,
                                  const MuOptions& options);
[[nodiscard]] MuResult minimize_J(double B, double theta, const GridSpec& grid, double tol = 1e-8,
                                  int max_outer = 200);

/// minimize_J on grid and grid.refined(), mu and alpha Richardson-extrapolated.
struct MuExtrapolated {
  MuResult coarse;
  MuResult fine;
  double mu = 0.0;
  double alpha = 1.0;
};
[[nodiscard]] MuExtrapolated minimize_J_extrapolated(double B, double theta, const GridSpec& grid,
                                                     const MuOptions& options = {});

[[nodiscard]] double J_functional(const ComplexVector& u, const FieldGauge& gauge,
                                  const GridSpec& grid);

/// | ||d1 u|| - ||d2 u|| | / max of the two. Rejects the zero vector.
[[nodiscard]] double symmetry_residual(const ComplexVector& u, const FieldGauge& gauge,
                                       const GridSpec& grid);

/// v(x) = u(-x2, x1) on a square grid: v(i, j) = u(n + 1 - j, i).
[[nodiscard]] ComplexVector rotate_state(const ComplexVector& u, const GridSpec& grid);

}  // namespace magrect
