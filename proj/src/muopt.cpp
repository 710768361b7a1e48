#include "magrect/muopt.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "magrect/eigensolve.hpp"

namespace magrect {

namespace {

RestartResult run_restart(double B, double theta, const GridSpec& grid, const MuOptions& options,
                          double alpha_seed, int phase_seed, ComplexVector& state) {
  const FieldGauge gauge(B, theta);
  const auto diffs = covariant_differences(grid, gauge);
  const double w = std::sqrt(grid.cell_area());

  SolverOptions so;
  so.tol = options.solver_tol;
  so.seed = 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(phase_seed + 1);

  RestartResult run;
  run.alpha_seed = alpha_seed;
  run.phase_seed = phase_seed;
  double alpha = alpha_seed;
  int calm_steps = 0;
  for (int k = 0; k < options.max_outer; ++k) {
    const auto ground = smallest_eigenpair(assemble_hamiltonian(grid, gauge, Aspect(alpha)), so);
    const double n1 = w * (diffs.d1 * ground.u).norm();
    const double n2 = w * (diffs.d2 * ground.u).norm();
    if (!(n1 > 0.0) || !(n2 > 0.0)) {
      throw DegenerateNormError("minimize_J: a covariant derivative norm vanished");
    }
    const double J = 2.0 * n1 * n2;
    run.objective_trace.push_back(J);
    run.iterations = k + 1;
    run.mu = J;
    run.alpha = alpha;
    state = ground.u;
    if (k > 0) {
      const double prev = run.objective_trace[k - 1];
      calm_steps = std::abs(J - prev) <= options.tol * J ? calm_steps + 1 : 0;
      if (calm_steps >= 2) {
        run.converged = true;
        break;
      }
    }
    alpha = std::sqrt(n1 / n2);
  }
  // Report the alpha that balances the final state.
  const double n1 = w * (diffs.d1 * state).norm();
  const double n2 = w * (diffs.d2 * state).norm();
  run.alpha = std::sqrt(n1 / n2);
  return run;
}

}  // namespace

double J_functional(const ComplexVector& u, const FieldGauge& gauge, const GridSpec& grid) {
  const auto norms = covariant_norms(grid, gauge, u);
  const double n = l2_norm(grid, u);
  if (n == 0.0) throw std::invalid_argument("J_functional: zero vector");
  return 2.0 * norms.d1 * norms.d2 / (n * n);
}

double symmetry_residual(const ComplexVector& u, const FieldGauge& gauge, const GridSpec& grid) {
  if (u.size() != grid.size()) throw std::invalid_argument("symmetry_residual: size mismatch");
  if (u.norm() == 0.0) throw std::invalid_argument("symmetry_residual: zero vector");
  const auto norms = covariant_norms(grid, gauge, u);
  return std::abs(norms.d1 - norms.d2) / std::max(norms.d1, norms.d2);
}

ComplexVector rotate_state(const ComplexVector& u, const GridSpec& grid) {
  if (!grid.is_square()) throw std::invalid_argument("rotate_state: needs a square grid");
  if (u.size() != grid.size()) throw std::invalid_argument("rotate_state: size mismatch");
  const int n = grid.n1();
  ComplexVector v(u.size());
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) v[grid.index(i, j)] = u[grid.index(n + 1 - j, i)];
  }
  return v;
}

MuResult minimize_J(double B, double theta, const GridSpec& grid, const MuOptions& options) {
  if (options.alpha_seeds.empty() || options.phase_seeds < 1) {
    throw std::invalid_argument("minimize_J: need at least one restart");
  }
  if (!(options.tol > 0.0) || options.max_outer < 2) {
    throw std::invalid_argument("minimize_J: need tol > 0 and max_outer >= 2");
  }
  for (double s : options.alpha_seeds) (void)Aspect(s);

  struct Slot {
    RestartResult run;
    ComplexVector state;
  };
  const int count = static_cast<int>(options.alpha_seeds.size()) * options.phase_seeds;
  std::vector<Slot> slots(count);
  const auto task = [&](int idx) {
    Slot& s = slots[idx];
    const double alpha_seed = options.alpha_seeds[idx / options.phase_seeds];
    const int phase_seed = idx % options.phase_seeds;
    try {
      s.run = run_restart(B, theta, grid, options, alpha_seed, phase_seed, s.state);
    } catch (const std::exception& e) {
      s.run.alpha_seed = alpha_seed;
      s.run.phase_seed = phase_seed;
      s.run.mu = std::numeric_limits<double>::infinity();
      s.run.error = e.what();
    }
  };
  if (options.concurrent) {
    std::vector<std::future<void>> pending;
    for (int idx = 0; idx < count; ++idx) pending.push_back(std::async(std::launch::async, task, idx));
    for (auto& f : pending) f.get();
  } else {
    for (int idx = 0; idx < count; ++idx) task(idx);
  }

  // Smallest mu wins; ties go to the lower restart index.
  int best = -1;
  for (int idx = 0; idx < count; ++idx) {
    if (!slots[idx].run.error.empty()) continue;
    if (best < 0 || slots[idx].run.mu < slots[best].run.mu) best = idx;
  }
  if (best < 0) {
    throw DegenerateNormError("minimize_J: every restart failed: " + slots.front().run.error);
  }

  MuResult out;
  const auto& winner = slots[best];
  out.mu = winner.run.mu;
  out.alpha = winner.run.alpha;
  out.iterations = winner.run.iterations;
  out.objective_trace = winner.run.objective_trace;
  out.converged = winner.run.converged;
  out.minimiser = winner.state;
  out.symmetry_residual = symmetry_residual(winner.state, FieldGauge(B, theta), grid);
  out.restarts = count;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto& s : slots) {
    if (s.run.error.empty() && s.run.converged) {
      lo = std::min(lo, s.run.mu);
      hi = std::max(hi, s.run.mu);
    }
    out.runs.push_back(std::move(s.run));
  }
  out.restart_spread = hi >= lo ? (hi - lo) / lo : 0.0;
  return out;
}

MuResult minimize_J(double B, double theta, const GridSpec& grid, double tol, int max_outer) {
  MuOptions options;
  options.tol = tol;
  options.max_outer = max_outer;
  return minimize_J(B, theta, grid, options);
}

MuExtrapolated minimize_J_extrapolated(double B, double theta, const GridSpec& grid,
                                       const MuOptions& options) {
  MuExtrapolated out;
  out.coarse = minimize_J(B, theta, grid, options);
  out.fine = minimize_J(B, theta, grid.refined(), options);
  out.mu = richardson_extrapolate(out.coarse.mu, out.fine.mu, 2.0, 2);
  out.alpha = richardson_extrapolate(out.coarse.alpha, out.fine.alpha, 2.0, 2);
  return out;
}

}  // namespace magrect
