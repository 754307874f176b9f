#include "cher/lie.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cher {

namespace {

CMatrix unit(int n, int row, int col) {
  CMatrix m = CMatrix::Zero(n, n);
  m(row, col) = 1.0;
  return m;
}

bool is_hermitian(const CMatrix& h, double tolerance) {
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tolerance * scale;
}

}  // namespace

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

GeneratorSet::GeneratorSet(int n) : n_(n) {
  require(n >= 2, "dimension must be at least 2, got " + std::to_string(n));
  const Complex i(0.0, 1.0);
  generators_.assign(static_cast<std::size_t>(n * n), CMatrix::Zero(n, n));
  generators_[0] = CMatrix::Identity(n, n);
  for (int k = 2; k <= n; ++k) {
    for (int j = 1; j < k; ++j) {
      const int idx = ladder_index(j, k);
      generators_[idx] = unit(n, j - 1, k - 1) + unit(n, k - 1, j - 1);
      generators_[idx + 1] = -i * unit(n, j - 1, k - 1) + i * unit(n, k - 1, j - 1);
    }
    CMatrix d = CMatrix::Zero(n, n);
    const double scale = std::sqrt(2.0 / (k * (k - 1.0)));
    for (int r = 0; r < k - 1; ++r) d(r, r) = scale;
    d(k - 1, k - 1) = -(k - 1.0) * scale;
    generators_[diagonal_index(k)] = d;
  }

  const int dim = n * n - 1;
  structure_.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  for (int k = 1; k <= dim; ++k) {
    for (int l = 1; l <= dim; ++l) {
      const CMatrix c = commutator(generators_[k], generators_[l]);
      for (int m = 1; m <= dim; ++m) {
        const Complex tr = (c * generators_[m]).trace();
        structure_[(static_cast<std::size_t>(k - 1) * dim + (l - 1)) * dim + (m - 1)] =
            (tr / (4.0 * i)).real();
      }
    }
  }
}

double GeneratorSet::structure_constant(int k, int l, int m) const {
  const int dim = n_ * n_ - 1;
  require(k >= 1 && l >= 1 && m >= 1 && k <= dim && l <= dim && m <= dim,
          "structure constant index out of range");
  return structure_[(static_cast<std::size_t>(k - 1) * dim + (l - 1)) * dim + (m - 1)];
}

CVector GeneratorSet::coordinates(const CMatrix& a) const {
  require(a.rows() == n_ && a.cols() == n_, "matrix dimension does not match generator set");
  CVector c(size());
  c(0) = a.trace() / static_cast<double>(n_);
  for (int j = 1; j < size(); ++j) c(j) = (generators_[j] * a).trace() / 2.0;
  return c;
}

CMatrix GeneratorSet::compose(const CVector& coords) const {
  require(coords.size() == size(), "coordinate vector has wrong length");
  CMatrix a = CMatrix::Zero(n_, n_);
  for (int j = 0; j < size(); ++j) a += coords(j) * generators_[j];
  return a;
}

GeneratorSet build_generators(int n) { return GeneratorSet(n); }

bool LadderBasis::is_csa(int index) const {
  return std::find(csa_indices.begin(), csa_indices.end(), index) != csa_indices.end();
}

LadderBasis build_ladder_basis(int n) {
  require(n >= 2, "dimension must be at least 2, got " + std::to_string(n));
  const GeneratorSet gens(n);
  LadderBasis basis;
  basis.n = n;
  basis.operators.assign(static_cast<std::size_t>(n * n), CMatrix::Zero(n, n));
  basis.operators[0] = CMatrix::Identity(n, n);
  for (int k = 2; k <= n; ++k) {
    for (int j = 1; j < k; ++j) {
      const int idx = ladder_index(j, k);
      basis.operators[idx] = unit(n, j - 1, k - 1);
      basis.operators[idx + 1] = unit(n, k - 1, j - 1);
    }
    basis.operators[diagonal_index(k)] = gens[diagonal_index(k)];
    basis.csa_indices.push_back(diagonal_index(k));
  }
  return basis;
}

Diagonalizer simultaneous_diagonalizer(int n) {
  const GeneratorSet gens(n);
  const LadderBasis ladder = build_ladder_basis(n);
  CMatrix t(gens.size(), gens.size());
  for (int m = 0; m < gens.size(); ++m) t.col(m) = gens.coordinates(ladder.operators[m]);
  Diagonalizer d;
  d.inverse = t;
  d.forward = t.inverse();
  return d;
}

AdjointMap adjoint_rep(const CMatrix& h, const GeneratorSet& gens, Basis basis, double tolerance) {
  require(h.rows() == gens.n() && h.cols() == gens.n(), "Hamiltonian dimension does not match generator set");
  require(is_hermitian(h, tolerance), "adjoint_rep requires a Hermitian matrix");
  AdjointMap ad;
  ad.n = gens.n();
  ad.basis = basis;
  ad.matrix.resize(gens.size(), gens.size());
  if (basis == Basis::generator) {
    for (int k = 0; k < gens.size(); ++k) ad.matrix.col(k) = gens.coordinates(commutator(h, gens[k]));
  } else {
    const LadderBasis ladder = build_ladder_basis(gens.n());
    const Diagonalizer x = simultaneous_diagonalizer(gens.n());
    for (int k = 0; k < gens.size(); ++k) {
      ad.matrix.col(k) = x.forward * gens.coordinates(commutator(h, ladder.operators[k]));
    }
  }
  return ad;
}

const Root& RootSystem::root(int ladder_index) const {
  for (const auto& r : roots) {
    if (r.index == ladder_index) return r;
  }
  throw ValidationError("no root with ladder index " + std::to_string(ladder_index) +
                        " in su(" + std::to_string(n) + ")");
}

RVector RootSystem::simple_coordinates(int ladder_index) const {
  return change_matrix.transpose().fullPivLu().solve(root(ladder_index).vector);
}

int RootSystem::opposite(int ladder_index) const {
  const Root& r = root(ladder_index);
  return r.positive ? r.index + 1 : r.index - 1;
}

RootSystem root_system(int n, double tolerance) {
  require(n >= 2, "dimension must be at least 2, got " + std::to_string(n));
  const GeneratorSet gens(n);
  const LadderBasis ladder = build_ladder_basis(n);

  RootSystem rs;
  rs.n = n;
  for (int k = 2; k <= n; ++k) {
    for (int j = 1; j < k; ++j) {
      for (int flip = 0; flip < 2; ++flip) {
        Root r;
        r.index = ladder_index(j, k) + flip;
        r.row = flip ? k : j;
        r.col = flip ? j : k;
        r.vector.resize(n - 1);
        const CMatrix& km = ladder.operators[r.index];
        for (int d = 2; d <= n; ++d) {
          const CMatrix c = commutator(gens[diagonal_index(d)] / 2.0, km);
          const Complex a = c(r.row - 1, r.col - 1);
          if ((c - a * km).cwiseAbs().maxCoeff() > tolerance || std::abs(a.imag()) > tolerance) {
            throw NumericalError("ladder operator " + std::to_string(r.index) +
                                 " is not a root vector of the Cartan subalgebra");
          }
          r.vector(d - 2) = a.real();
        }
        for (int d = n - 2; d >= 0; --d) {
          if (std::abs(r.vector(d)) > tolerance) {
            r.positive = r.vector(d) > 0;
            break;
          }
        }
        rs.roots.push_back(std::move(r));
      }
    }
  }
  std::sort(rs.roots.begin(), rs.roots.end(), [](const Root& a, const Root& b) { return a.index < b.index; });

  std::vector<const Root*> positives;
  for (const auto& r : rs.roots) {
    if (r.positive) positives.push_back(&r);
  }
  for (auto& r : rs.roots) {
    if (!r.positive) continue;
    bool decomposable = false;
    for (std::size_t a = 0; a < positives.size() && !decomposable; ++a) {
      for (std::size_t b = a; b < positives.size() && !decomposable; ++b) {
        decomposable = (positives[a]->vector + positives[b]->vector - r.vector).cwiseAbs().maxCoeff() <= tolerance;
      }
    }
    r.simple = !decomposable;
    rs.positive_indices.push_back(r.index);
    if (r.simple) rs.simple_indices.push_back(r.index);
  }

  rs.change_matrix.resize(n - 1, n - 1);
  for (int s = 0; s < n - 1; ++s) rs.change_matrix.row(s) = rs.root(rs.simple_indices.at(s)).vector.transpose();
  const double det = rs.change_matrix.determinant();
  if (std::abs(det) < tolerance) throw NumericalError("simple roots are linearly dependent");
  rs.jacobian = 1.0 / std::abs(det);
  return rs;
}

}  // namespace cher
