#pragma once

// Peierls (link-phase) discretisation of the magnetic Dirichlet form
//
//   a^-2 |(d1 - i A1) u|^2 + a^2 |(d2 - i A2) u|^2
//
// on a uniform interior grid of the unit square. Sites are ordered row-major
// with x1 fastest: p = (i - 1) + (j - 1) * n1 for 1 <= i <= n1, 1 <= j <= n2.

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "magrect/domain.hpp"

namespace magrect {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using SparseRowMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using SparseColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

class GridSpec {
 public:
  GridSpec(int n1, int n2);
  /// Square grid, n interior points per axis.
  explicit GridSpec(int n) : GridSpec(n, n) {}

  [[nodiscard]] int n1() const noexcept { return n1_; }
  [[nodiscard]] int n2() const noexcept { return n2_; }
  [[nodiscard]] double h1() const noexcept { return 1.0 / (n1_ + 1); }
  [[nodiscard]] double h2() const noexcept { return 1.0 / (n2_ + 1); }
  [[nodiscard]] double cell_area() const noexcept { return h1() * h2(); }
  [[nodiscard]] int size() const noexcept { return n1_ * n2_; }
  [[nodiscard]] bool is_square() const noexcept { return n1_ == n2_; }

  /// 0-based site index of the 1-based interior node (i, j).
  [[nodiscard]] int index(int i, int j) const noexcept { return (i - 1) + (j - 1) * n1_; }
  [[nodiscard]] Point point(int i, int j) const noexcept {
    return {-0.5 + i * h1(), -0.5 + j * h2()};
  }

  /// Grid with half the spacing: n -> 2n + 1 interior points per axis.
  [[nodiscard]] GridSpec refined() const { return {2 * n1_ + 1, 2 * n2_ + 1}; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n1_;
  int n2_;
};

/// Sparse complex Hermitian matrix together with the grid it lives on.
///
/// Built only through assemble_hamiltonian / discrete_gauge_transform, which
/// write the (p, q) and (q, p) entries as exact conjugates of each other.
class HermitianMatrix {
 public:
  HermitianMatrix(GridSpec grid, SparseRowMatrix matrix);

  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] const SparseRowMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  [[nodiscard]] Complex entry(int p, int q) const { return matrix_.coeff(p, q); }
  [[nodiscard]] ComplexVector apply(const ComplexVector& x) const { return matrix_ * x; }

  /// max |H(p,q) - conj(H(q,p))| over the stored pattern; zero when exactly Hermitian.
  [[nodiscard]] double hermitian_defect() const;
  [[nodiscard]] int max_row_nonzeros() const;
  [[nodiscard]] bool all_finite() const;

  /// One stored entry per line: "row col re im", 0-based, 17 significant digits.
  void write_coordinates(std::ostream& out) const;

 private:
  GridSpec grid_;
  SparseRowMatrix matrix_;
};

/// 5-point magnetic stencil with Peierls link phases exp(-i * int A . dl).
/// For the linear gauge the link integral is exactly h_k * A_k(midpoint).
[[nodiscard]] HermitianMatrix assemble_hamiltonian(const GridSpec& grid, const FieldGauge& gauge,
                                                   Aspect a);

/// D^* H D with D = diag(exp(i phi)); phi holds one real value per site.
[[nodiscard]] HermitianMatrix discrete_gauge_transform(const GridSpec& grid,
                                                       std::span<const double> phi,
                                                       const HermitianMatrix& H);

/// Samples a scalar field at the interior nodes in site order.
[[nodiscard]] std::vector<double> sample_field(const GridSpec& grid,
                                               const std::function<double(Point)>& f);
[[nodiscard]] ComplexVector sample_complex(const GridSpec& grid,
                                           const std::function<Complex(Point)>& f);

/// Covariant forward differences on the links of the grid, including the
/// links that touch the Dirichlet boundary. D1 has (n1 + 1) * n2 rows, D2 has
/// n1 * (n2 + 1) rows; (D_k u) on a link is (U u(next) - u(here)) / h_k with
/// U the Peierls phase of that link.
struct CovariantDifferences {
  SparseColMatrix d1;
  SparseColMatrix d2;
};

[[nodiscard]] CovariantDifferences covariant_differences(const GridSpec& grid,
                                                         const FieldGauge& gauge);

/// Discrete L^2 inner product (u, v) = h1 h2 sum conj(u_p) v_p.
[[nodiscard]] Complex inner(const GridSpec& grid, const ComplexVector& u, const ComplexVector& v);
[[nodiscard]] double l2_norm(const GridSpec& grid, const ComplexVector& u);

struct CovariantNorms {
  double d1 = 0.0;  ///< ||d1^A u||
  double d2 = 0.0;  ///< ||d2^A u||
};

[[nodiscard]] CovariantNorms covariant_norms(const GridSpec& grid, const FieldGauge& gauge,
                                             const ComplexVector& u);

}  // namespace magrect
