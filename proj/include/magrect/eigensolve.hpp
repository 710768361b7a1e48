#pragma once

// Lowest eigenpairs of the discrete magnetic Hamiltonian, the deflated solve
// that yields the first-order eigenvector perturbation, and mesh
// extrapolation.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "magrect/lattice.hpp"

namespace magrect {

/// Raised when the residual certificate cannot be met.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual, int iterations)
      : std::runtime_error(what), best_residual_(best_residual), iterations_(iterations) {}

  [[nodiscard]] double best_residual() const noexcept { return best_residual_; }
  [[nodiscard]] int iterations() const noexcept { return iterations_; }

 private:
  double best_residual_;
  int iterations_;
};

/// Raised when the projected system of the deflated solve stalls, which
/// happens when the eigenvalue is (nearly) degenerate.
class DegenerateEigenvalueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenPair {
  double lambda = 0.0;
  /// Unit norm in the discrete L^2 inner product; largest component real positive.
  ComplexVector u;
  /// ||H u - lambda u|| / ||u||.
  double residual = 0.0;
  bool phase_fixed = false;
  /// Number of shift-invert applications spent.
  int iterations = 0;
};

struct SolverOptions {
  double tol = 1e-9;
  int max_iterations = 3000;
  int krylov_dim = 60;
  std::uint64_t seed = 0x5eed;
};

/// Rotates u so its largest-magnitude component is real and positive.
void fix_phase(ComplexVector& u);

[[nodiscard]] double rayleigh_quotient(const HermitianMatrix& H, const ComplexVector& v);

/// Lowest `count` eigenpairs, ascending, each with residual <= options.tol.
///
/// Shift-invert Lanczos on H^-1 (H is positive definite) with full
/// reorthogonalisation and explicit restarts. Throws ConvergenceError after
/// options.max_iterations inverse applications, std::invalid_argument for
/// non-finite entries.
[[nodiscard]] std::vector<EigenPair> lowest_eigenpairs(const HermitianMatrix& H, int count,
                                                       const SolverOptions& options);

[[nodiscard]] EigenPair smallest_eigenpair(const HermitianMatrix& H, double tol = 1e-9,
                                           int max_iterations = 3000);
[[nodiscard]] EigenPair smallest_eigenpair(const HermitianMatrix& H, const SolverOptions& options);

/// Solves P (H - lambda) P w = P rhs for w orthogonal to u1, where P projects
/// out u1 (discrete L^2 unit vector). Preconditioned CG with P H^-1 P.
///
/// Stops once ||P (H - lambda) w - P rhs|| <= tol * max(1, ||P rhs||) in the
/// discrete norm. Throws DegenerateEigenvalueError when the iteration stalls
/// or loses positivity.
[[nodiscard]] ComplexVector solve_deflated(const HermitianMatrix& H, double lambda,
                                           const ComplexVector& rhs, const ComplexVector& u1,
                                           double tol = 1e-10);

/// (r^p fine - coarse) / (r^p - 1).
[[nodiscard]] double richardson_extrapolate(double lambda_coarse, double lambda_fine,
                                            double mesh_ratio, int order);

}  // namespace magrect
