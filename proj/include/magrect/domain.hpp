#pragma once

// Geometry and gauge of the unit-area magnetic rectangle problem.
//
// Every rectangle (-a/2, a/2) x (-1/(2a), 1/(2a)) is mapped onto the fixed
// unit square (-1/2, 1/2)^2; the aspect ratio then only enters as the pair of
// weights a^-2, a^2 in front of the two covariant derivatives.

#include <numbers>

namespace magrect {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kPi2 = kPi * kPi;

/// Homogeneous field B with the linear gauge A = B * (-theta x2, (1 - theta) x1).
/// theta = 1/2 is the symmetric gauge, theta = 0 the Landau gauge along x2.
struct FieldGauge {
  double B = 0.0;
  double theta = 0.5;

  FieldGauge() = default;
  FieldGauge(double field, double gauge_theta);

  /// Same field, same gauge, opposite sign of B.
  [[nodiscard]] FieldGauge reversed() const { return {-B, theta}; }
};

/// Side parameter a > 0 of the rectangle with sides a and 1/a.
class Aspect {
 public:
  explicit Aspect(double a);

  [[nodiscard]] double value() const noexcept { return a_; }
  [[nodiscard]] double inverse() const noexcept { return 1.0 / a_; }
  /// Weight in front of |d1^A u|^2 in the rescaled form.
  [[nodiscard]] double weight1() const noexcept { return 1.0 / (a_ * a_); }
  /// Weight in front of |d2^A u|^2 in the rescaled form.
  [[nodiscard]] double weight2() const noexcept { return a_ * a_; }

 private:
  double a_;
};

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

struct Potential {
  double A1 = 0.0;
  double A2 = 0.0;
};

/// A(x) for a point of the closed unit square [-1/2, 1/2]^2.
/// Throws std::invalid_argument for points outside the square.
[[nodiscard]] Potential vector_potential(const FieldGauge& gauge, Point x);

/// Exact lowest eigenvalue at B = 0: pi^2 (a^-2 + a^2).
[[nodiscard]] double analytic_lambda_zero_field(Aspect a);

/// Sufficient condition |a - 1| >= sqrt(c / (2 pi^2)) |B| under which the
/// zero-field lower bound at a already exceeds the quadratic upper bound at
/// the square, so the square is certified optimal without any eigensolve.
[[nodiscard]] bool theorem12_region(Aspect a, double B);

/// Threshold slope sqrt(c / (2 pi^2)) of theorem12_region.
[[nodiscard]] double theorem12_slope();

}  // namespace magrect
