#include "magrect/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace magrect {

namespace {

using Triplet = Eigen::Triplet<Complex>;

Complex peierls_phase(double h, double A_mid) { return std::polar(1.0, -h * A_mid); }

// Link phases of the two link families. The potential is evaluated at the
// link midpoint; that is exact for the linear gauge.
Complex link1_phase(const GridSpec& g, const FieldGauge& gauge, int i, int j) {
  const Point mid{-0.5 + (i + 0.5) * g.h1(), -0.5 + j * g.h2()};
  return peierls_phase(g.h1(), vector_potential(gauge, mid).A1);
}

Complex link2_phase(const GridSpec& g, const FieldGauge& gauge, int i, int j) {
  const Point mid{-0.5 + i * g.h1(), -0.5 + (j + 0.5) * g.h2()};
  return peierls_phase(g.h2(), vector_potential(gauge, mid).A2);
}

}  // namespace

GridSpec::GridSpec(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 3 || n2 < 3) {
    throw std::invalid_argument("GridSpec: need at least 3 interior points per axis, got " +
                                std::to_string(n1) + "x" + std::to_string(n2));
  }
}

HermitianMatrix::HermitianMatrix(GridSpec grid, SparseRowMatrix matrix)
    : grid_(grid), matrix_(std::move(matrix)) {
  if (matrix_.rows() != grid_.size() || matrix_.cols() != grid_.size()) {
    throw std::invalid_argument("HermitianMatrix: matrix does not match grid size");
  }
  matrix_.makeCompressed();
}

double HermitianMatrix::hermitian_defect() const {
  double defect = 0.0;
  for (int p = 0; p < matrix_.outerSize(); ++p) {
    for (SparseRowMatrix::InnerIterator it(matrix_, p); it; ++it) {
      const Complex mirror = matrix_.coeff(it.col(), it.row());
      defect = std::max(defect, std::abs(it.value() - std::conj(mirror)));
    }
  }
  return defect;
}

int HermitianMatrix::max_row_nonzeros() const {
  int widest = 0;
  for (int p = 0; p < matrix_.outerSize(); ++p) {
    widest = std::max(widest, static_cast<int>(matrix_.outerIndexPtr()[p + 1] -
                                               matrix_.outerIndexPtr()[p]));
  }
  return widest;
}

bool HermitianMatrix::all_finite() const {
  const Complex* v = matrix_.valuePtr();
  for (Eigen::Index k = 0; k < matrix_.nonZeros(); ++k) {
    if (!std::isfinite(v[k].real()) || !std::isfinite(v[k].imag())) return false;
  }
  return true;
}

void HermitianMatrix::write_coordinates(std::ostream& out) const {
  char line[128];
  for (int p = 0; p < matrix_.outerSize(); ++p) {
    for (SparseRowMatrix::InnerIterator it(matrix_, p); it; ++it) {
      std::snprintf(line, sizeof line, "%d %d %.17g %.17g\n", static_cast<int>(it.row()),
                    static_cast<int>(it.col()), it.value().real(), it.value().imag());
      out << line;
    }
  }
}

HermitianMatrix assemble_hamiltonian(const GridSpec& grid, const FieldGauge& gauge, Aspect a) {
  const int n1 = grid.n1();
  const int n2 = grid.n2();
  const double c1 = a.weight1() / (grid.h1() * grid.h1());
  const double c2 = a.weight2() / (grid.h2() * grid.h2());

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(5) * grid.size());
  for (int j = 1; j <= n2; ++j) {
    for (int i = 1; i <= n1; ++i) {
      const int p = grid.index(i, j);
      entries.emplace_back(p, p, Complex(2.0 * c1 + 2.0 * c2, 0.0));
      if (i < n1) {
        const int q = grid.index(i + 1, j);
        const Complex hop = -c1 * link1_phase(grid, gauge, i, j);
        entries.emplace_back(p, q, hop);
        entries.emplace_back(q, p, std::conj(hop));
      }
      if (j < n2) {
        const int q = grid.index(i, j + 1);
        const Complex hop = -c2 * link2_phase(grid, gauge, i, j);
        entries.emplace_back(p, q, hop);
        entries.emplace_back(q, p, std::conj(hop));
      }
    }
  }
  SparseRowMatrix m(grid.size(), grid.size());
  m.setFromTriplets(entries.begin(), entries.end());
  return {grid, std::move(m)};
}

HermitianMatrix discrete_gauge_transform(const GridSpec& grid, std::span<const double> phi,
                                         const HermitianMatrix& H) {
  if (static_cast<int>(phi.size()) != grid.size() || H.dim() != grid.size()) {
    throw std::invalid_argument("discrete_gauge_transform: dimension mismatch");
  }
  SparseRowMatrix m = H.matrix();
  for (int p = 0; p < m.outerSize(); ++p) {
    for (SparseRowMatrix::InnerIterator it(m, p); it; ++it) {
      const auto q = it.col();
      if (q == p) continue;
      // Conjugate pairs stay exact: the factor for (q, p) is the conjugate of the one for (p, q).
      it.valueRef() *= std::polar(1.0, phi[q] - phi[p]);
    }
  }
  return {grid, std::move(m)};
}

std::vector<double> sample_field(const GridSpec& grid, const std::function<double(Point)>& f) {
  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  for (int j = 1; j <= grid.n2(); ++j) {
    for (int i = 1; i <= grid.n1(); ++i) out[grid.index(i, j)] = f(grid.point(i, j));
  }
  return out;
}

ComplexVector sample_complex(const GridSpec& grid, const std::function<Complex(Point)>& f) {
  ComplexVector out(grid.size());
  for (int j = 1; j <= grid.n2(); ++j) {
    for (int i = 1; i <= grid.n1(); ++i) out[grid.index(i, j)] = f(grid.point(i, j));
  }
  return out;
}

CovariantDifferences covariant_differences(const GridSpec& grid, const FieldGauge& gauge) {
  const int n1 = grid.n1();
  const int n2 = grid.n2();
  const double inv_h1 = 1.0 / grid.h1();
  const double inv_h2 = 1.0 / grid.h2();

  std::vector<Triplet> t1;
  t1.reserve(static_cast<std::size_t>(2) * (n1 + 1) * n2);
  for (int j = 1; j <= n2; ++j) {
    for (int i = 0; i <= n1; ++i) {
      const int link = i + (j - 1) * (n1 + 1);
      if (i >= 1) t1.emplace_back(link, grid.index(i, j), Complex(-inv_h1, 0.0));
      if (i + 1 <= n1) {
        t1.emplace_back(link, grid.index(i + 1, j), inv_h1 * link1_phase(grid, gauge, i, j));
      }
    }
  }
  std::vector<Triplet> t2;
  t2.reserve(static_cast<std::size_t>(2) * n1 * (n2 + 1));
  for (int j = 0; j <= n2; ++j) {
    for (int i = 1; i <= n1; ++i) {
      const int link = (i - 1) + j * n1;
      if (j >= 1) t2.emplace_back(link, grid.index(i, j), Complex(-inv_h2, 0.0));
      if (j + 1 <= n2) {
        t2.emplace_back(link, grid.index(i, j + 1), inv_h2 * link2_phase(grid, gauge, i, j));
      }
    }
  }
  CovariantDifferences d;
  d.d1.resize((n1 + 1) * n2, grid.size());
  d.d1.setFromTriplets(t1.begin(), t1.end());
  d.d2.resize(n1 * (n2 + 1), grid.size());
  d.d2.setFromTriplets(t2.begin(), t2.end());
  return d;
}

Complex inner(const GridSpec& grid, const ComplexVector& u, const ComplexVector& v) {
  return grid.cell_area() * u.dot(v);
}

double l2_norm(const GridSpec& grid, const ComplexVector& u) {
  return std::sqrt(grid.cell_area()) * u.norm();
}

CovariantNorms covariant_norms(const GridSpec& grid, const FieldGauge& gauge,
                               const ComplexVector& u) {
  if (u.size() != grid.size()) {
    throw std::invalid_argument("covariant_norms: vector does not match grid");
  }
  const auto d = covariant_differences(grid, gauge);
  const double w = std::sqrt(grid.cell_area());
  return {w * (d.d1 * u).norm(), w * (d.d2 * u).norm()};
}

}  // namespace magrect
