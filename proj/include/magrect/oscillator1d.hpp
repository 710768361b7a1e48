#pragma once

// nu(beta): lowest Dirichlet eigenvalue of -d^2/dx^2 + beta^2 x^2 on (-1/2, 1/2).
//
// The primary route is a finite-difference tridiagonal eigensolve at two
// resolutions followed by Richardson extrapolation. A Numerov shooting
// solver provides an independent cross-check.

#include <span>
#include <vector>

namespace magrect {

/// c = int x^2 phi(x)^2 dx = 1/12 - 1/(2 pi^2), phi(x) = sqrt(2) cos(pi x).
[[nodiscard]] double c_constant();

/// Same integral by composite Simpson quadrature with `panels` (even) panels.
[[nodiscard]] double c_constant_quadrature(int panels = 2000);

struct NuPoint {
  double beta = 0.0;
  double nu = 0.0;
  double lower_check = 0.0;  ///< pi^2
  double upper_check = 0.0;  ///< pi^2 + c beta^2
  double asymptote = 0.0;    ///< |beta|

  /// lower_check <= nu <= upper_check and nu >= asymptote, each with `slack`.
  [[nodiscard]] bool within_bounds(double slack = 1e-8) const;
};

struct OscillatorEigenfunction {
  double beta = 0.0;
  std::vector<double> x;        ///< nodes on [-1/2, 1/2], endpoints included
  std::vector<double> samples;  ///< phi_beta(x), zero at the endpoints
  bool positive = false;        ///< strictly positive at every interior node
};

/// Lowest eigenvalue of the finite-difference operator with `intervals`
/// uniform intervals (intervals - 1 unknowns). Second-order accurate.
[[nodiscard]] double nu_discrete(double beta, int intervals);

/// Numerov shooting with bisection on the node count, extrapolated over
/// `steps` and 2 * `steps`.
[[nodiscard]] double nu_shooting(double beta, int steps = 4000);

/// nu(beta) from the resolution / 2 and resolution grids, Richardson
/// extrapolated. resolution must be even and >= 64.
[[nodiscard]] NuPoint nu(double beta, int resolution = 2048);

/// Positive ground state, unit discrete L^2 norm, extrapolated onto the
/// nodes of the resolution / 2 grid.
[[nodiscard]] OscillatorEigenfunction phi_beta(double beta, int resolution = 2048);

[[nodiscard]] std::vector<NuPoint> figure1_data(std::span<const double> betas,
                                                int resolution = 2048);

}  // namespace magrect
