#include "magrect/domain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "magrect/oscillator1d.hpp"

namespace magrect {

FieldGauge::FieldGauge(double field, double gauge_theta) : B(field), theta(gauge_theta) {
  if (!std::isfinite(B) || !std::isfinite(theta)) {
    throw std::invalid_argument("FieldGauge: B and theta must be finite");
  }
}

Aspect::Aspect(double a) : a_(a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("Aspect: a must be positive and finite, got " + std::to_string(a));
  }
}

Potential vector_potential(const FieldGauge& gauge, Point x) {
  constexpr double kEdge = 0.5 + 1e-14;
  if (std::abs(x.x1) > kEdge || std::abs(x.x2) > kEdge) {
    throw std::invalid_argument("vector_potential: point outside the unit square");
  }
  return {-gauge.theta * x.x2 * gauge.B, (1.0 - gauge.theta) * x.x1 * gauge.B};
}

double analytic_lambda_zero_field(Aspect a) {
  return kPi2 * (a.weight1() + a.weight2());
}

double theorem12_slope() { return std::sqrt(c_constant() / (2.0 * kPi2)); }

bool theorem12_region(Aspect a, double B) {
  return std::abs(a.value() - 1.0) >= theorem12_slope() * std::abs(B);
}

}  // namespace magrect
