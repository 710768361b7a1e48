#include "magrect/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

namespace magrect {

namespace {

using Cholesky = Eigen::SimplicialLLT<SparseColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

class InverseOperator {
 public:
  explicit InverseOperator(const HermitianMatrix& H) {
    SparseColMatrix a = H.matrix();
    llt_.compute(a);
    if (llt_.info() != Eigen::Success) {
      throw std::runtime_error("Cholesky factorisation failed: matrix is not positive definite");
    }
  }

  [[nodiscard]] ComplexVector solve(const ComplexVector& b) const { return llt_.solve(b); }

 private:
  Cholesky llt_;
};

ComplexVector random_start(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ComplexVector v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = uni(rng);
    const double im = uni(rng);
    v[k] = Complex(re, im);
  }
  return v / v.norm();
}

struct RitzPair {
  double lambda;
  ComplexVector y;  // Euclidean unit vector
  double residual;
};

RitzPair make_ritz(const HermitianMatrix& H, ComplexVector y) {
  y /= y.norm();
  const ComplexVector Hy = H.apply(y);
  const double lambda = y.dot(Hy).real();
  const double residual = (Hy - lambda * y).norm();
  return {lambda, std::move(y), residual};
}

EigenPair to_eigenpair(const HermitianMatrix& H, RitzPair r, int iterations) {
  EigenPair out;
  out.lambda = r.lambda;
  out.residual = r.residual;
  out.u = std::move(r.y);
  fix_phase(out.u);
  out.phase_fixed = true;
  out.u /= l2_norm(H.grid(), out.u);
  out.iterations = iterations;
  return out;
}

}  // namespace

void fix_phase(ComplexVector& u) {
  if (u.size() == 0) return;
  Eigen::Index k = 0;
  u.cwiseAbs2().maxCoeff(&k);
  const double mag = std::abs(u[k]);
  if (mag == 0.0) return;
  u *= std::conj(u[k]) / mag;
  u[k] = Complex(std::abs(u[k]), 0.0);
}

double rayleigh_quotient(const HermitianMatrix& H, const ComplexVector& v) {
  return v.dot(H.apply(v)).real() / v.squaredNorm();
}

std::vector<EigenPair> lowest_eigenpairs(const HermitianMatrix& H, int count,
                                         const SolverOptions& options) {
  const int dim = H.dim();
  if (count < 1 || count > dim) throw std::invalid_argument("lowest_eigenpairs: bad count");
  if (!(options.tol > 0.0)) throw std::invalid_argument("lowest_eigenpairs: tol must be positive");
  if (!H.all_finite()) throw std::invalid_argument("lowest_eigenpairs: non-finite matrix entries");

  const InverseOperator inverse(H);
  const int m = std::clamp(options.krylov_dim, count + 2, dim);

  Eigen::MatrixXcd V(dim, m + 1);
  std::vector<double> alpha(m);
  std::vector<double> beta(m);
  ComplexVector start = random_start(dim, options.seed);
  int applications = 0;
  double best = std::numeric_limits<double>::infinity();

  while (true) {
    V.col(0) = start / start.norm();
    int steps = 0;
    std::vector<RitzPair> ritz;

    for (int k = 0; k < m; ++k) {
      ComplexVector w = inverse.solve(V.col(k));
      ++applications;
      alpha[k] = V.col(k).dot(w).real();
      w -= alpha[k] * V.col(k);
      if (k > 0) w -= beta[k - 1] * V.col(k - 1);
      for (int pass = 0; pass < 2; ++pass) {
        w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
      }
      beta[k] = w.norm();
      steps = k + 1;

      const bool exhausted = beta[k] <= 1e-14 * std::abs(alpha[k]);
      const bool check = exhausted || steps == m || (steps >= count + 2 && steps % 10 == 0);
      if (check) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
        for (int i = 0; i < steps; ++i) {
          T(i, i) = alpha[i];
          if (i + 1 < steps) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(T);
        const int wanted = std::min(count, steps);
        ritz.clear();
        for (int r = 0; r < wanted; ++r) {
          const Eigen::VectorXd s = tri.eigenvectors().col(steps - 1 - r);
          ritz.push_back(make_ritz(H, V.leftCols(steps) * s.cast<Complex>()));
        }
        std::sort(ritz.begin(), ritz.end(),
                  [](const RitzPair& x, const RitzPair& y) { return x.lambda < y.lambda; });
        double worst = 0.0;
        for (const auto& r : ritz) worst = std::max(worst, r.residual);
        if (wanted == count) best = std::min(best, worst);
        if (wanted == count && worst <= options.tol) {
          std::vector<EigenPair> out;
          for (auto& r : ritz) out.push_back(to_eigenpair(H, std::move(r), applications));
          return out;
        }
        if (exhausted || applications >= options.max_iterations) break;
      }
      if (exhausted) break;
      V.col(k + 1) = w / beta[k];
    }

    if (applications >= options.max_iterations) {
      char text[160];
      std::snprintf(text, sizeof text,
                    "lowest_eigenpairs: no convergence after %d inverse applications (best residual %.3e)",
                    applications, best);
      throw ConvergenceError(text, best, applications);
    }
    // Explicit restart from the sum of the current Ritz vectors.
    start = ComplexVector::Zero(dim);
    for (const auto& r : ritz) start += r.y;
    if (start.norm() == 0.0) start = random_start(dim, options.seed + applications);
  }
}

EigenPair smallest_eigenpair(const HermitianMatrix& H, const SolverOptions& options) {
  return lowest_eigenpairs(H, 1, options).front();
}

EigenPair smallest_eigenpair(const HermitianMatrix& H, double tol, int max_iterations) {
  SolverOptions options;
  options.tol = tol;
  options.max_iterations = max_iterations;
  return smallest_eigenpair(H, options);
}

ComplexVector solve_deflated(const HermitianMatrix& H, double lambda, const ComplexVector& rhs,
                             const ComplexVector& u1, double tol) {
  const auto& grid = H.grid();
  if (rhs.size() != H.dim() || u1.size() != H.dim()) {
    throw std::invalid_argument("solve_deflated: dimension mismatch");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("solve_deflated: tol must be positive");

  // Euclidean unit copy of u1; the projector is the same in either norm.
  const ComplexVector e = u1 / u1.norm();
  const auto project = [&e](ComplexVector x) {
    x -= e * e.dot(x);
    return x;
  };
  const double weight = std::sqrt(grid.cell_area());

  ComplexVector r = project(rhs);
  const double target = tol * std::max(1.0, weight * r.norm());
  ComplexVector w = ComplexVector::Zero(H.dim());
  if (weight * r.norm() <= target) return w;

  const InverseOperator inverse(H);
  ComplexVector z = project(inverse.solve(r));
  ComplexVector p = z;
  Complex rz = r.dot(z);

  const int max_steps = 50 + 4 * static_cast<int>(std::sqrt(static_cast<double>(H.dim())));
  double best = weight * r.norm();
  int since_best = 0;
  for (int step = 0; step < max_steps; ++step) {
    const ComplexVector q = project(H.apply(p) - lambda * p);
    const double curvature = p.dot(q).real();
    if (!(curvature > 0.0)) {
      throw DegenerateEigenvalueError(
          "solve_deflated: projected operator is not positive; eigenvalue is not simple or not the lowest");
    }
    const Complex step_len = rz / curvature;
    w += step_len * p;
    r -= step_len * q;
    const double res = weight * r.norm();
    if (res <= target) return project(w);
    if (res < 0.5 * best) {
      best = res;
      since_best = 0;
    } else if (++since_best > 40) {
      break;
    }
    z = project(inverse.solve(r));
    const Complex rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw DegenerateEigenvalueError("solve_deflated: projected residual stagnated at " +
                                  std::to_string(best) +
                                  "; the eigenvalue is likely (nearly) degenerate");
}

double richardson_extrapolate(double lambda_coarse, double lambda_fine, double mesh_ratio,
                              int order) {
  if (!(mesh_ratio > 1.0) || order < 1) {
    throw std::invalid_argument("richardson_extrapolate: need mesh_ratio > 1 and order >= 1");
  }
  const double rp = std::pow(mesh_ratio, order);
  return (rp * lambda_fine - lambda_coarse) / (rp - 1.0);
}

}  // namespace magrect
