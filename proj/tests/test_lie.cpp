#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cher/lie.hpp"

using namespace cher;

namespace {

double levi_civita(int k, int l, int m) {
  if (k == l || l == m || k == m) return 0.0;
  return ((l - k) * (m - k) * (m - l)) / 2.0;
}

CMatrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("qubit structure constants are the Levi-Civita symbol") {
  const GeneratorSet g = build_generators(2);
  for (int k = 1; k <= 3; ++k) {
    for (int l = 1; l <= 3; ++l) {
      for (int m = 1; m <= 3; ++m) CHECK(g.structure_constant(k, l, m) == doctest::Approx(levi_civita(k, l, m)));
    }
  }
}

TEST_CASE("qutrit diagonal generator L8") {
  const GeneratorSet g = build_generators(3);
  CMatrix expected = CMatrix::Zero(3, 3);
  expected.diagonal() << 1.0, 1.0, -2.0;
  expected /= std::sqrt(3.0);
  CHECK((g[8] - expected).norm() < 1e-14);
}

TEST_CASE("generators are Hermitian, traceless and orthogonal") {
  for (int n = 2; n <= 5; ++n) {
    const GeneratorSet g = build_generators(n);
    REQUIRE(g.size() == n * n);
    CHECK((g[0] - CMatrix::Identity(n, n)).norm() == 0.0);
    for (int j = 1; j < g.size(); ++j) {
      CHECK((g[j] - g[j].adjoint()).norm() < 1e-12);
      CHECK(std::abs(g[j].trace()) < 1e-12);
      for (int k = 1; k < g.size(); ++k) {
        const Complex tr = (g[j] * g[k]).trace();
        CHECK(std::abs(tr - (j == k ? 2.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("structure constants are totally antisymmetric and reproduce commutators") {
  for (int n = 2; n <= 4; ++n) {
    const GeneratorSet g = build_generators(n);
    const int d = g.size() - 1;
    for (int k = 1; k <= d; ++k) {
      for (int l = 1; l <= d; ++l) {
        CMatrix rebuilt = CMatrix::Zero(n, n);
        for (int m = 1; m <= d; ++m) {
          const double c = g.structure_constant(k, l, m);
          CHECK(c == doctest::Approx(-g.structure_constant(l, k, m)));
          CHECK(c == doctest::Approx(-g.structure_constant(m, l, k)));
          rebuilt += Complex(0.0, 2.0 * c) * g[m];
        }
        CHECK((rebuilt - commutator(g[k], g[l])).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("coordinates and compose are inverse") {
  std::mt19937_64 rng(3);
  const GeneratorSet g = build_generators(4);
  std::normal_distribution<double> n;
  CMatrix a(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a(i, j) = Complex(n(rng), n(rng));
  }
  CHECK((g.compose(g.coordinates(a)) - a).norm() < 1e-12);
}

TEST_CASE("dimension below two is rejected") {
  CHECK_THROWS_AS(build_generators(1), ValidationError);
  CHECK_THROWS_AS(root_system(0), ValidationError);
}

TEST_CASE("ladder basis has unit single-entry operators in conjugate pairs") {
  for (int n = 2; n <= 5; ++n) {
    const LadderBasis lb = build_ladder_basis(n);
    REQUIRE(static_cast<int>(lb.operators.size()) == n * n);
    CHECK(static_cast<int>(lb.csa_indices.size()) == n - 1);
    for (int k = 2; k <= n; ++k) {
      for (int j = 1; j < k; ++j) {
        const int m = ladder_index(j, k);
        const CMatrix& up = lb.operators[static_cast<std::size_t>(m)];
        const CMatrix& down = lb.operators[static_cast<std::size_t>(m + 1)];
        CHECK(up(j - 1, k - 1) == Complex(1.0));
        CHECK(up.cwiseAbs().sum() == doctest::Approx(1.0));
        CHECK((down - up.adjoint()).norm() == 0.0);
        CHECK_FALSE(lb.is_csa(m));
      }
    }
  }
}

TEST_CASE("adjoint representation invariants") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 4; ++n) {
    const GeneratorSet g = build_generators(n);
    const CMatrix h = random_hermitian(n, rng);
    const AdjointMap ad = adjoint_rep(h, g);
    CHECK(ad.matrix.row(0).norm() < 1e-12);
    CHECK(ad.matrix.col(0).norm() < 1e-12);
    // i ad_H is real antisymmetric, so ad_H itself is Hermitian.
    CHECK((ad.matrix - ad.matrix.adjoint()).norm() < 1e-10);
    CHECK(ad.matrix.real().norm() < 1e-10);
    // Definition: [H, L_k] = sum_j L_j ad(j, k).
    for (int k = 0; k < g.size(); ++k) {
      CMatrix rebuilt = CMatrix::Zero(n, n);
      for (int j = 0; j < g.size(); ++j) rebuilt += ad.matrix(j, k) * g[j];
      CHECK((rebuilt - commutator(h, g[k])).norm() < 1e-10);
    }
    // The identity component of H does not matter.
    const AdjointMap shifted = adjoint_rep(h + 3.0 * CMatrix::Identity(n, n), g);
    CHECK((shifted.matrix - ad.matrix).norm() < 1e-10);
  }
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(adjoint_rep(bad, build_generators(2)), ValidationError);
}

TEST_CASE("Cartan elements act diagonally on the ladder basis with root eigenvalues") {
  for (int n = 2; n <= 4; ++n) {
    const GeneratorSet g = build_generators(n);
    const RootSystem roots = root_system(n);
    RVector lambda(n - 1);
    for (int d = 0; d < n - 1; ++d) lambda(d) = 0.3 + 0.7 * d;
    CMatrix h = CMatrix::Zero(n, n);
    for (int k = 2; k <= n; ++k) h += 0.5 * lambda(k - 2) * g[diagonal_index(k)];
    const AdjointMap ad = adjoint_rep(h, g, Basis::ladder);
    for (const Root& r : roots.roots) {
      CHECK(std::abs(ad.matrix(r.index, r.index) - r.vector.dot(lambda)) < 1e-12);
    }
    CMatrix off = ad.matrix;
    off.diagonal().setZero();
    CHECK(off.norm() < 1e-12);

    const Diagonalizer x = simultaneous_diagonalizer(n);
    const CMatrix gen_ad = adjoint_rep(h, g).matrix;
    CMatrix d = x.forward * gen_ad * x.inverse;
    CMatrix d_off = d;
    d_off.diagonal().setZero();
    CHECK(d_off.norm() < 1e-12);
  }
}

TEST_CASE("qutrit root table") {
  const RootSystem r = root_system(3);
  CHECK(r.positive_indices == std::vector<int>{1, 4, 6});
  CHECK(r.simple_indices == std::vector<int>{1, 6});
  const double s3 = std::sqrt(3.0);
  CHECK((r.root(1).vector - RVector::Unit(2, 0)).norm() < 1e-12);
  CHECK(std::abs(r.root(4).vector(0) - 0.5) < 1e-12);
  CHECK(std::abs(r.root(4).vector(1) - s3 / 2) < 1e-12);
  CHECK(std::abs(r.root(6).vector(0) + 0.5) < 1e-12);
  CHECK(std::abs(r.root(6).vector(1) - s3 / 2) < 1e-12);
  CHECK(r.jacobian == doctest::Approx(2.0 / s3).epsilon(1e-12));
  CHECK(r.opposite(1) == 2);
  CHECK(r.opposite(7) == 6);
  const RVector c = r.simple_coordinates(4);
  CHECK(std::abs(c(0) - 1.0) < 1e-12);
  CHECK(std::abs(c(1) - 1.0) < 1e-12);
}

TEST_CASE("root system geometry for su(n)") {
  for (int n = 2; n <= 5; ++n) {
    const RootSystem r = root_system(n);
    CHECK(static_cast<int>(r.roots.size()) == n * (n - 1));
    CHECK(static_cast<int>(r.positive_indices.size()) == n * (n - 1) / 2);
    CHECK(static_cast<int>(r.simple_indices.size()) == n - 1);
    const double len = r.roots.front().vector.norm();
    for (const Root& a : r.roots) {
      CHECK(a.vector.norm() == doctest::Approx(len).epsilon(1e-12));
      const Root& opp = r.root(r.opposite(a.index));
      CHECK((opp.vector + a.vector).norm() < 1e-12);
      for (const Root& b : r.roots) {
        if (b.index == a.index || b.index == r.opposite(a.index)) continue;
        const double angle = std::acos(std::clamp(a.vector.dot(b.vector) / (len * len), -1.0, 1.0));
        const bool allowed = std::abs(angle - kPi / 3) < 1e-10 || std::abs(angle - kPi / 2) < 1e-10 ||
                             std::abs(angle - 2 * kPi / 3) < 1e-10;
        CHECK(allowed);
      }
    }
    for (int m : r.positive_indices) {
      const RVector c = r.simple_coordinates(m);
      RVector rebuilt = RVector::Zero(n - 1);
      for (Eigen::Index s = 0; s < c.size(); ++s) {
        CHECK(c(s) > -1e-10);
        CHECK(std::abs(c(s) - std::round(c(s))) < 1e-10);
        rebuilt += c(s) * r.root(r.simple_indices[static_cast<std::size_t>(s)]).vector;
      }
      CHECK((rebuilt - r.root(m).vector).norm() < 1e-10);
    }
  }
}
