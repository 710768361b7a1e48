#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "magrect/domain.hpp"
#include "magrect/oscillator1d.hpp"

using namespace magrect;

TEST_CASE("c constant") {
  // mpmath quadrature in the oracle: 0.032672741512164447611
  CHECK(c_constant() == doctest::Approx(0.032672741512164447611).epsilon(1e-15));
  CHECK(std::abs(c_constant_quadrature() - c_constant()) <= 1e-10);
  CHECK_THROWS_AS((void)c_constant_quadrature(3), std::invalid_argument);
}

TEST_CASE("nu at zero field is pi^2") {
  CHECK(std::abs(nu(0.0).nu - kPi2) <= 1e-6);
  CHECK(std::abs(nu(0.0, 4096).nu - kPi2) <= 1e-8);
}

TEST_CASE("nu matches the scipy tridiagonal oracle") {
  // Oracle: eigh_tridiagonal at 4096 / 8192 intervals. Its own roundoff is
  // about 3e-8, hence the absolute tolerance.
  const std::vector<std::pair<double, double>> table{
      {1.0, 9.902258676390767},    {5.0, 10.675039491227617},  {20.0, 20.612153343612007},
      {50.0, 50.00142108503699},   {100.0, 100.00000001645954}, {200.0, 199.9999999765405}};
  for (const auto& [beta, expected] : table) {
    CAPTURE(beta);
    CHECK(std::abs(nu(beta, 4096).nu - expected) <= 1e-7);
  }
}

TEST_CASE("nu agrees with Numerov shooting") {
  for (double beta : {0.0, 1.0, 5.0, 20.0, 50.0}) {
    CAPTURE(beta);
    CHECK(std::abs(nu(beta, 4096).nu - nu_shooting(beta)) <= 5e-8 * std::max(1.0, beta));
  }
}

TEST_CASE("nu is even, increasing and within its bounds") {
  for (double beta : {0.5, 3.0, 17.0}) CHECK(nu(-beta).nu == nu(beta).nu);
  double previous = 0.0;
  for (double beta : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
    CAPTURE(beta);
    const auto p = nu(beta);
    CHECK(p.within_bounds());
    CHECK(p.nu > previous);
    previous = p.nu;
  }
  const double ratio = nu(200.0, 4096).nu / 200.0;
  CHECK(ratio >= 1.0);
  CHECK(ratio <= 1.01);
}

TEST_CASE("quadratic bound is tight for small beta") {
  const auto p = nu(1.0, 4096);
  CHECK(p.nu <= p.upper_check);
  CHECK(p.upper_check - p.nu <= 1e-4);
}

TEST_CASE("phi_beta") {
  SUBCASE("beta = 0 is sqrt(2) cos(pi x)") {
    const auto f = phi_beta(0.0);
    CHECK(f.positive);
    double err = 0.0;
    for (std::size_t k = 0; k < f.x.size(); ++k) {
      err = std::max(err, std::abs(f.samples[k] - std::sqrt(2.0) * std::cos(kPi * f.x[k])));
    }
    CHECK(err <= 1e-6);
  }
  SUBCASE("even about the centre") {
    const auto f = phi_beta(7.0);
    const std::size_t m = f.x.size();
    for (std::size_t k = 0; k < m; ++k) CHECK(std::abs(f.samples[k] - f.samples[m - 1 - k]) <= 1e-10);
  }
  SUBCASE("beta = 50 concentrates at the centre") {
    const auto f = phi_beta(50.0, 4096);
    const std::size_t mid = f.x.size() / 2;
    const auto node = [&](double x) {
      return mid + static_cast<std::size_t>(std::lround(x * (f.x.size() - 1)));
    };
    REQUIRE(f.x[mid] == doctest::Approx(0.0).scale(1.0));
    REQUIRE(f.x[node(0.375)] == 0.375);
    // Oracle: 16384 intervals, x = 0.375 is a node of every grid used.
    CHECK(f.samples[node(0.375)] / f.samples[mid] ==
          doctest::Approx(0.02955469441483816).epsilon(1e-6));
    CHECK(f.samples[node(0.4)] / f.samples[mid] < 0.02);
  }
}

TEST_CASE("figure1_data") {
  const std::vector<double> betas{0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0};
  const auto rows = figure1_data(betas, 1024);
  REQUIRE(rows.size() == betas.size());
  CHECK(rows[0].nu == doctest::Approx(kPi2).epsilon(1e-7));
  for (std::size_t k = 1; k < rows.size(); ++k) {
    CHECK(rows[k].nu > rows[k - 1].nu);
    CHECK(rows[k].nu > rows[k].asymptote);
  }
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS((void)nu(1.0, 63), std::invalid_argument);
  CHECK_THROWS_AS((void)nu(1.0, 32), std::invalid_argument);
  CHECK_THROWS_AS((void)nu(std::nan(""), 256), std::invalid_argument);
  CHECK_THROWS_AS((void)phi_beta(INFINITY, 256), std::invalid_argument);
  CHECK_THROWS_AS((void)nu_shooting(1.0, 10), std::invalid_argument);
}
