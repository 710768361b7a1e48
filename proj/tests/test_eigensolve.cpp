#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "magrect/eigensolve.hpp"
#include "magrect/oscillator1d.hpp"

using namespace magrect;

namespace {

ComplexVector random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(dim);
  for (int k = 0; k < dim; ++k) v[k] = Complex(g(rng), g(rng));
  return v;
}

double extrapolated(int n, double a, double B, double theta) {
  const GridSpec g(n);
  const auto c = smallest_eigenpair(assemble_hamiltonian(g, FieldGauge(B, theta), Aspect(a)));
  const auto f = smallest_eigenpair(assemble_hamiltonian(g.refined(), FieldGauge(B, theta), Aspect(a)));
  return richardson_extrapolate(c.lambda, f.lambda, 2.0, 2);
}

}  // namespace

TEST_CASE("closed-form discrete Laplacian eigenvalue") {
  const GridSpec g(63);
  const auto H = assemble_hamiltonian(g, FieldGauge(0.0, 0.5), Aspect(1.0));
  const auto e = smallest_eigenpair(H, 1e-9);
  // (4 / h^2)(1 - cos(pi h)), h = 1/64
  CHECK(e.lambda == doctest::Approx(19.735245534455316).epsilon(1e-12));
  CHECK(e.residual <= 1e-9);
  CHECK(l2_norm(g, e.u) == doctest::Approx(1.0).epsilon(1e-12));

  SUBCASE("phase convention and real ground state") {
    Eigen::Index k = 0;
    e.u.cwiseAbs().maxCoeff(&k);
    CHECK(e.u[k].imag() == 0.0);
    CHECK(e.u[k].real() > 0.0);
    CHECK(e.phase_fixed);
    CHECK(e.u.imag().cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("extrapolated zero-field eigenvalues") {
  CHECK(extrapolated(63, 2.0, 0.0, 0.5) == doctest::Approx(41.94581870462977).epsilon(1e-4));
  const double square = extrapolated(63, 1.0, 0.0, 0.5);
  CHECK(std::abs(square - 2.0 * kPi2) <= 1e-5 * 2.0 * kPi2);
}

TEST_CASE("regression baselines against the scipy oracle") {
  // scipy eigsh shift-invert on the oracle's own assembly, n = 63 / 127.
  CHECK(extrapolated(63, 1.0, 5.0, 0.5) == doctest::Approx(20.136900636461494).epsilon(1e-9));
  const double b10 = extrapolated(63, 1.0, 10.0, 0.5);
  CHECK(b10 == doctest::Approx(21.315551419447615).epsilon(1e-9));
  // Diamagnetic and Landau lower bounds, best product trial state above.
  CHECK(b10 >= std::max(2.0 * kPi2, 10.0));
  CHECK(b10 <= 2.0 * nu(5.0).nu);
}

TEST_CASE("sparse solver agrees with a dense eigendecomposition") {
  const GridSpec g(15);
  for (double B : {0.0, 5.0, 40.0}) {
    const auto H = assemble_hamiltonian(g, FieldGauge(B, 0.5), Aspect(1.3));
    const Eigen::VectorXd dense =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(Eigen::MatrixXcd(H.matrix()),
                                                        Eigen::EigenvaluesOnly)
            .eigenvalues();
    SolverOptions o;
    const auto pairs = lowest_eigenpairs(H, 2, o);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].lambda == doctest::Approx(dense[0]).epsilon(1e-12));
    CHECK(pairs[1].lambda == doctest::Approx(dense[1]).epsilon(1e-12));
    CHECK(pairs[1].residual <= o.tol);
  }
}

TEST_CASE("eigenvalue never exceeds a Rayleigh quotient") {
  std::mt19937_64 rng(42);
  const auto H = assemble_hamiltonian(GridSpec(31), FieldGauge(7.0, 0.5), Aspect(1.2));
  const double lambda = smallest_eigenpair(H).lambda;
  for (int k = 0; k < 10; ++k) CHECK(lambda <= rayleigh_quotient(H, random_vector(H.dim(), rng)));
}

TEST_CASE("eigenvalue is invariant under a discrete gauge transform") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-kPi, kPi);
  const GridSpec g(31);
  const auto H = assemble_hamiltonian(g, FieldGauge(3.0, 0.5), Aspect(1.0));
  std::vector<double> phi(g.size());
  for (double& p : phi) p = uni(rng);
  const double l0 = smallest_eigenpair(H).lambda;
  const double l1 = smallest_eigenpair(discrete_gauge_transform(g, phi, H)).lambda;
  CHECK(std::abs(l0 - l1) <= 1e-12 * l0);
}

TEST_CASE("field reversal is complex conjugation") {
  const GridSpec g(31);
  const double plus = smallest_eigenpair(assemble_hamiltonian(g, FieldGauge(6.0, 0.5), Aspect(1.4))).lambda;
  const double minus = smallest_eigenpair(assemble_hamiltonian(g, FieldGauge(-6.0, 0.5), Aspect(1.4))).lambda;
  CHECK(std::abs(plus - minus) <= 1e-10 * plus);
}

TEST_CASE("solver failures") {
  const auto H = assemble_hamiltonian(GridSpec(31), FieldGauge(2.0, 0.5), Aspect(1.0));
  SolverOptions o;
  o.tol = 1e-30;
  o.max_iterations = 25;
  try {
    (void)smallest_eigenpair(H, o);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.best_residual() > 0.0);
    CHECK(e.best_residual() < 1e-6);
    CHECK(e.iterations() >= 25);
  }

  SparseRowMatrix bad = H.matrix();
  bad.coeffRef(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS((void)smallest_eigenpair(HermitianMatrix(H.grid(), bad)), std::invalid_argument);
  CHECK_THROWS_AS((void)smallest_eigenpair(H, -1.0), std::invalid_argument);
}

TEST_CASE("deflated solve") {
  const GridSpec g(21);
  const auto H = assemble_hamiltonian(g, FieldGauge(3.0, 0.5), Aspect(1.0));
  SolverOptions o;
  o.tol = 1e-11;
  const auto pairs = lowest_eigenpairs(H, 2, o);
  const auto& ground = pairs[0];

  SUBCASE("trivial right sides") {
    CHECK(solve_deflated(H, ground.lambda, ComplexVector::Zero(g.size()), ground.u).norm() == 0.0);
    CHECK(solve_deflated(H, ground.lambda, ground.u, ground.u).norm() <= 1e-9);
  }

  SUBCASE("matches the dense pseudo-inverse and stays orthogonal") {
    std::mt19937_64 rng(9);
    const ComplexVector rhs = random_vector(g.size(), rng);
    const ComplexVector w = solve_deflated(H, ground.lambda, rhs, ground.u, 1e-12);
    CHECK(std::abs(inner(g, ground.u, w)) <= 1e-10);

    // Dense route: eigen-expansion without the ground mode.
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(H.matrix()));
    ComplexVector ref = ComplexVector::Zero(g.size());
    for (int k = 1; k < g.size(); ++k) {
      const auto v = es.eigenvectors().col(k);
      ref += v * (v.dot(rhs) / (es.eigenvalues()[k] - ground.lambda));
    }
    CHECK((w - ref).norm() <= 1e-9 * ref.norm());
  }

  SUBCASE("zero field, square: the first-order right side vanishes") {
    const auto H0 = assemble_hamiltonian(g, FieldGauge(0.0, 0.5), Aspect(1.0));
    const auto u0 = smallest_eigenpair(H0, o);
    const auto d = covariant_differences(g, FieldGauge(0.0, 0.5));
    const ComplexVector rhs =
        2.0 * (d.d1.adjoint() * (d.d1 * u0.u)) - 2.0 * (d.d2.adjoint() * (d.d2 * u0.u));
    const ComplexVector w = solve_deflated(H0, u0.lambda, rhs, u0.u, 1e-10);
    CHECK(l2_norm(g, w) <= 1e-8);
  }

  SUBCASE("wrong eigenvalue is reported as degenerate") {
    std::mt19937_64 rng(1);
    const ComplexVector rhs = random_vector(g.size(), rng);
    CHECK_THROWS_AS((void)solve_deflated(H, pairs[1].lambda + 1.0, rhs, ground.u),
                    DegenerateEigenvalueError);
  }
}

TEST_CASE("richardson_extrapolate") {
  CHECK(richardson_extrapolate(3.25, 3.25, 2.0, 2) == doctest::Approx(3.25).epsilon(1e-15));
  CHECK(richardson_extrapolate(19.70, 19.73, 2.0, 2) == doctest::Approx(19.74).epsilon(1e-12));
  CHECK(richardson_extrapolate(1.0, 2.0, 2.0, 1) == doctest::Approx(3.0));
  CHECK_THROWS_AS((void)richardson_extrapolate(1.0, 2.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)richardson_extrapolate(1.0, 2.0, 2.0, 0), std::invalid_argument);
}
