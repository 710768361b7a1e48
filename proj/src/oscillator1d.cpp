#include "magrect/oscillator1d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "magrect/domain.hpp"
#include "magrect/eigensolve.hpp"

namespace magrect {

namespace {

void check_resolution(int resolution) {
  if (resolution < 64 || resolution % 2 != 0) {
    throw std::invalid_argument("oscillator: resolution must be even and >= 64, got " +
                                std::to_string(resolution));
  }
}

void check_beta(double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("oscillator: beta must be finite");
}

struct TridiagonalGround {
  double value;
  std::vector<double> vector;  // interior nodes, h * sum v^2 = 1, positive
};

TridiagonalGround ground_state(double beta, int intervals, bool want_vector) {
  if (intervals < 4) throw std::invalid_argument("oscillator: need at least 4 intervals");
  const lapack_int n = intervals - 1;
  const double h = 1.0 / intervals;
  const double off = -1.0 / (h * h);
  std::vector<double> d(n);
  std::vector<double> e(n, off);
  for (lapack_int k = 0; k < n; ++k) {
    const double x = -0.5 + (k + 1) * h;
    d[k] = 2.0 / (h * h) + beta * beta * x * x;
  }
  lapack_int found = 0;
  double w[1];
  std::vector<double> z(n);
  std::vector<lapack_int> support(2);
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0,
                     0.0, 1, 1, 0.0, &found, w, z.data(), n, support.data());
  if (info != 0 || found != 1) {
    throw std::runtime_error("oscillator: LAPACKE_dstevr failed, info " + std::to_string(info));
  }
  // Rayleigh quotient in difference form: every term is positive, so the
  // value is accurate to a few ulps even though ||T|| ~ 4 / h^2.
  double norm2 = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
  double sum = 0.0;
  for (lapack_int k = 0; k < n; ++k) {
    const double left = k > 0 ? z[k - 1] : 0.0;
    const double step = z[k] - left;
    const double x = -0.5 + (k + 1) * h;
    kinetic += step * step;
    potential += beta * beta * x * x * z[k] * z[k];
    norm2 += z[k] * z[k];
    sum += z[k];
  }
  kinetic += z[n - 1] * z[n - 1];
  TridiagonalGround out{(kinetic / (h * h) + potential) / norm2, {}};
  if (want_vector) {
    const double scale = (sum < 0.0 ? -1.0 : 1.0) / std::sqrt(h * norm2);
    for (double& v : z) v *= scale;
    out.vector = std::move(z);
  }
  return out;
}

// Numerov march for y'' = (beta^2 x^2 - E) y from y(-1/2) = 0. Returns true if
// y stays positive on (-1/2, 1/2], i.e. E lies below the lowest eigenvalue.
bool below_ground(double beta, double energy, int steps) {
  const double h = 1.0 / steps;
  const double k = h * h / 12.0;
  const auto f = [&](int n) {
    const double x = -0.5 + n * h;
    return beta * beta * x * x - energy;
  };
  double y_prev = 0.0;
  double y = h;
  for (int n = 1; n < steps; ++n) {
    const double y_next =
        (2.0 * y * (1.0 + 5.0 * k * f(n)) - y_prev * (1.0 - k * f(n - 1))) / (1.0 - k * f(n + 1));
    if (y_next <= 0.0) return false;
    // Renormalise to keep the march in range for large beta.
    if (y_next > 1e200) {
      y_prev = y / y_next;
      y = 1.0;
      continue;
    }
    y_prev = y;
    y = y_next;
  }
  return true;
}

double shooting_eigenvalue(double beta, int steps) {
  double lo = kPi2 - 1.0;
  double hi = kPi2 + c_constant() * beta * beta + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below_ground(beta, mid, steps) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double c_constant() { return 1.0 / 12.0 - 1.0 / (2.0 * kPi2); }

double c_constant_quadrature(int panels) {
  if (panels < 2 || panels % 2 != 0) {
    throw std::invalid_argument("c_constant_quadrature: panels must be even and >= 2");
  }
  const double h = 1.0 / panels;
  const auto f = [](double x) {
    const double c = std::cos(kPi * x);
    return 2.0 * x * x * c * c;
  };
  double sum = f(-0.5) + f(0.5);
  for (int k = 1; k < panels; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * f(-0.5 + k * h);
  return sum * h / 3.0;
}

bool NuPoint::within_bounds(double slack) const {
  return nu >= lower_check - slack && nu <= upper_check + slack && nu >= asymptote - slack;
}

double nu_discrete(double beta, int intervals) {
  check_beta(beta);
  return ground_state(beta, intervals, false).value;
}

double nu_shooting(double beta, int steps) {
  check_beta(beta);
  if (steps < 64) throw std::invalid_argument("nu_shooting: steps must be >= 64");
  // Numerov is fourth-order accurate in the step.
  return richardson_extrapolate(shooting_eigenvalue(beta, steps),
                                shooting_eigenvalue(beta, 2 * steps), 2.0, 4);
}

NuPoint nu(double beta, int resolution) {
  check_beta(beta);
  check_resolution(resolution);
  const double coarse = nu_discrete(beta, resolution / 2);
  const double fine = nu_discrete(beta, resolution);
  NuPoint p;
  p.beta = beta;
  p.nu = richardson_extrapolate(coarse, fine, 2.0, 2);
  p.lower_check = kPi2;
  p.upper_check = kPi2 + c_constant() * beta * beta;
  p.asymptote = std::abs(beta);
  return p;
}

OscillatorEigenfunction phi_beta(double beta, int resolution) {
  check_beta(beta);
  check_resolution(resolution);
  const int coarse_n = resolution / 2;
  const auto coarse = ground_state(beta, coarse_n, true);
  const auto fine = ground_state(beta, resolution, true);

  OscillatorEigenfunction out;
  out.beta = beta;
  out.x.resize(coarse_n + 1);
  out.samples.assign(coarse_n + 1, 0.0);
  out.positive = true;
  for (int k = 0; k <= coarse_n; ++k) {
    out.x[k] = -0.5 + static_cast<double>(k) / coarse_n;
    if (k == 0 || k == coarse_n) continue;
    out.samples[k] = richardson_extrapolate(coarse.vector[k - 1], fine.vector[2 * k - 1], 2.0, 2);
    out.positive = out.positive && out.samples[k] > 0.0;
  }
  return out;
}

std::vector<NuPoint> figure1_data(std::span<const double> betas, int resolution) {
  std::vector<NuPoint> rows;
  rows.reserve(betas.size());
  for (double beta : betas) rows.push_back(nu(beta, resolution));
  return rows;
}

}  // namespace magrect
