#include "magrect/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "magrect/domain.hpp"
#include "magrect/oscillator1d.hpp"

namespace magrect {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

LambdaSolve lambda1_solve(Aspect a, const FieldGauge& gauge, const GridSpec& grid,
                          const SolverOptions& options) {
  const auto coarse = smallest_eigenpair(assemble_hamiltonian(grid, gauge, a), options);
  const auto fine = smallest_eigenpair(assemble_hamiltonian(grid.refined(), gauge, a), options);
  LambdaSolve out;
  out.coarse = coarse.lambda;
  out.fine = fine.lambda;
  out.lambda = richardson_extrapolate(coarse.lambda, fine.lambda, 2.0, 2);
  out.residual = std::max(coarse.residual, fine.residual);
  out.iterations = coarse.iterations + fine.iterations;
  return out;
}

double lambda1(double a, double B, double theta, const GridSpec& grid, double tol) {
  SolverOptions options;
  options.tol = tol;
  return lambda1_solve(Aspect(a), FieldGauge(B, theta), grid, options).lambda;
}

double upper_bound_quadratic(double a, double B) {
  const Aspect asp(a);
  const double a2 = asp.weight2();
  return analytic_lambda_zero_field(asp) + c_constant() * a2 / (1.0 + a2 * a2) * B * B;
}

double upper_bound_nu(double a, double B, int resolution) {
  const Aspect asp(a);
  const double a2 = asp.weight2();
  return (asp.weight1() + a2) * nu(a2 / (1.0 + a2 * a2) * B, resolution).nu;
}

double LowerBounds::best() const { return std::max({dia, landau, strip}); }

LowerBounds lower_bounds(double a, double B, int resolution) {
  const Aspect asp(a);
  LowerBounds out;
  out.dia = analytic_lambda_zero_field(asp);
  out.landau = std::abs(B);
  out.strip = std::max(asp.weight1() * nu(asp.weight2() * B, resolution).nu,
                       asp.weight2() * nu(asp.weight1() * B, resolution).nu);
  return out;
}

double ScanRecord::lower_best() const { return std::max({lower_dia, lower_landau, lower_strip}); }

double ScanRecord::upper_best() const { return std::min(upper_quad, upper_nu); }

bool ScanRecord::sandwich_holds(double slack) const {
  return ok && lower_best() - slack <= lambda && lambda <= upper_best() + slack;
}

bool ScanRecord::certified_by_bounds() const {
  return lower_dia >= 2.0 * kPi2 + 0.5 * c_constant() * B * B;
}

std::vector<ScanRecord> scan_conjecture(std::span<const double> a_values,
                                        std::span<const double> B_values, double theta,
                                        const GridSpec& grid, const ScanOptions& options) {
  for (double a : a_values) (void)Aspect(a);
  for (double B : B_values) (void)FieldGauge(B, theta);

  // Every (a, B) solve plus the square at each B, each computed once.
  std::vector<std::pair<double, double>> tasks;
  for (double a : a_values) {
    for (double B : B_values) tasks.emplace_back(a, B);
  }
  for (double B : B_values) {
    if (std::find(a_values.begin(), a_values.end(), 1.0) == a_values.end()) {
      tasks.emplace_back(1.0, B);
    }
  }

  std::vector<ScanRecord> solved(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    SolverOptions so;
    so.tol = options.tol;
    so.max_iterations = options.max_iterations;
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto [a, B] = tasks[k];
      ScanRecord& r = solved[k];
      r.a = a;
      r.B = B;
      r.theta = theta;
      r.n = grid.n1();
      r.tol = options.tol;
      r.in_theorem12_region = theorem12_region(Aspect(a), B);
      const auto lower = lower_bounds(a, B, options.nu_resolution);
      r.lower_dia = lower.dia;
      r.lower_landau = lower.landau;
      r.lower_strip = lower.strip;
      r.upper_quad = upper_bound_quadratic(a, B);
      r.upper_nu = upper_bound_nu(a, B, options.nu_resolution);
      try {
        const auto s = lambda1_solve(Aspect(a), FieldGauge(B, theta), grid, so);
        r.lambda = s.lambda;
        r.residual = s.residual;
        r.iterations = s.iterations;
      } catch (const ConvergenceError& e) {
        r.ok = false;
        r.error = e.what();
        r.lambda = kNaN;
        r.residual = e.best_residual();
        r.iterations = e.iterations();
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
        r.lambda = kNaN;
      }
    }
  };
  const int jobs = std::max(1, options.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::map<double, double> square;
  for (const auto& r : solved) {
    if (r.a == 1.0) square[r.B] = r.lambda;
  }
  std::vector<ScanRecord> out(solved.begin(),
                              solved.begin() + static_cast<std::ptrdiff_t>(a_values.size() *
                                                                           B_values.size()));
  for (auto& r : out) {
    r.margin = r.a == 1.0 ? (r.ok ? 0.0 : kNaN) : r.lambda - square.at(r.B);
  }
  return out;
}

FormulaTerms second_derivative_formula(double B, const GridSpec& grid, double tol) {
  if (!grid.is_square()) {
    throw std::invalid_argument("second_derivative_formula: needs a square grid");
  }
  const FieldGauge gauge(B, 0.5);
  const auto H = assemble_hamiltonian(grid, gauge, Aspect(1.0));
  const auto ground = smallest_eigenpair(H, tol);
  const auto d = covariant_differences(grid, gauge);
  const double w = std::sqrt(grid.cell_area());

  // Right side 2 (d1 v, d1 u) - 2 (d2 v, d2 u) as a site vector.
  const ComplexVector rhs =
      2.0 * (d.d1.adjoint() * (d.d1 * ground.u)) - 2.0 * (d.d2.adjoint() * (d.d2 * ground.u));
  const ComplexVector udot = solve_deflated(H, ground.lambda, rhs, ground.u, 1e-11);

  const double du1 = w * (d.d1 * ground.u).norm();
  const double du2 = w * (d.d2 * ground.u).norm();
  const double n0 = l2_norm(grid, udot);
  const double n1 = w * (d.d1 * udot).norm();
  const double n2 = w * (d.d2 * udot).norm();

  FormulaTerms out;
  out.lambda = ground.lambda;
  out.udot_norm = n0;
  out.half_second_derivative = 2.0 * ground.lambda + ground.lambda * n0 * n0 - n1 * n1 - n2 * n2;
  out.first_derivative = -2.0 * du1 * du1 + 2.0 * du2 * du2;
  return out;
}

DerivReport derivative_report(double B, const GridSpec& grid, double step, double tol) {
  if (!(step > 0.0) || step >= 0.5) {
    throw std::invalid_argument("derivative_report: step must lie in (0, 0.5)");
  }
  if (!grid.is_square()) throw std::invalid_argument("derivative_report: needs a square grid");
  constexpr double kTheta = 0.5;

  DerivReport r;
  r.B = B;
  r.step = step;
  r.eigen_gap = eigen_gap_square(B, grid, tol);
  r.simple = r.eigen_gap >= 10.0 * tol;
  if (!r.simple) {
    r.warnings.push_back("eigenvalue gap below 10 * tol; perturbation formulas are not trustworthy");
  }

  const auto lam = [&](double a) { return lambda1(a, B, kTheta, grid, tol); };
  const double l0 = lam(1.0);
  const double lp = lam(1.0 + step);
  const double lm = lam(1.0 - step);
  const double lph = lam(1.0 + 0.5 * step);
  const double lmh = lam(1.0 - 0.5 * step);

  const double d1_full = (lp - lm) / (2.0 * step);
  const double d1_half = (lph - lmh) / step;
  const double d2_full = (lp - 2.0 * l0 + lm) / (step * step);
  const double d2_half = (lph - 2.0 * l0 + lmh) / (0.25 * step * step);

  r.lambda_at_1 = l0;
  r.first_derivative_fd = richardson_extrapolate(d1_full, d1_half, 2.0, 2);
  r.half_second_derivative_fd = 0.5 * richardson_extrapolate(d2_full, d2_half, 2.0, 2);
  r.fd_truncation_estimate = 0.5 * std::abs(d2_half - d2_full);

  try {
    const auto coarse = second_derivative_formula(B, grid, tol);
    const auto fine = second_derivative_formula(B, grid.refined(), tol);
    r.half_second_derivative_formula = richardson_extrapolate(
        coarse.half_second_derivative, fine.half_second_derivative, 2.0, 2);
    r.udot_norm = fine.udot_norm;
  } catch (const DegenerateEigenvalueError& e) {
    r.half_second_derivative_formula = kNaN;
    r.udot_norm = kNaN;
    r.warnings.emplace_back(e.what());
  }
  const double scale = std::abs(r.half_second_derivative_fd);
  r.routes_agree = std::abs(r.half_second_derivative_formula - r.half_second_derivative_fd) <=
                   1e-2 * scale;
  if (!r.routes_agree) {
    r.warnings.push_back("formula and finite-difference second derivatives disagree beyond 1%");
  }
  return r;
}

double symmetry_check_square(double B, const GridSpec& grid, double tol) {
  if (!grid.is_square()) throw std::invalid_argument("symmetry_check_square: needs a square grid");
  const FieldGauge gauge(B, 0.5);
  const auto ground = smallest_eigenpair(assemble_hamiltonian(grid, gauge, Aspect(1.0)), tol);
  const auto norms = covariant_norms(grid, gauge, ground.u);
  return std::abs(norms.d1 - norms.d2) / std::max(norms.d1, norms.d2);
}

double eigen_gap_square(double B, const GridSpec& grid, double tol) {
  SolverOptions options;
  options.tol = tol;
  const auto pairs =
      lowest_eigenpairs(assemble_hamiltonian(grid, FieldGauge(B, 0.5), Aspect(1.0)), 2, options);
  return pairs[1].lambda - pairs[0].lambda;
}

}  // namespace magrect
