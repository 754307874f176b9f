#pragma once

// Generalized Gell-Mann generators of u(n), the gl(n) ladder basis, adjoint
// representations and the root system of su(n).
//
// Generator order ("gellmann-v1"): index 0 is the identity. For each
// k = 2..n (1-based matrix rows) we append, for j = 1..k-1, the symmetric
// generator |j><k| + |k><j| followed by the antisymmetric generator
// -i|j><k| + i|k><j|, and then the diagonal generator
//   sqrt(2/(k(k-1))) diag(1, ..., 1, -(k-1), 0, ..., 0).
// The diagonal generator for k therefore sits at index k^2 - 1, and for n = 2
// and n = 3 the order coincides with the Pauli and Gell-Mann matrices.
//
// The ladder basis replaces each symmetric/antisymmetric pair by
// K = |j><k| (same index as the symmetric generator) and K^dagger = |k><j|
// (index + 1). Diagonal generators and the identity are kept.

#include <vector>

#include "cher/common.hpp"

namespace cher {

/// Which basis of u(n) a coordinate vector or superoperator refers to.
enum class Basis { generator, ladder };

class GeneratorSet {
 public:
  explicit GeneratorSet(int n);

  int n() const { return n_; }
  /// Number of generators including the identity (n^2).
  int size() const { return n_ * n_; }
  const CMatrix& operator[](int index) const { return generators_.at(index); }
  const std::vector<CMatrix>& generators() const { return generators_; }

  /// c_{klm} for 1 <= k,l,m <= n^2-1, defined by [L_k, L_l] = 2i c_{klm} L_m.
  double structure_constant(int k, int l, int m) const;

  /// Coordinates of an arbitrary n x n matrix: A = a_0 I + sum_j a_j L_j.
  CVector coordinates(const CMatrix& a) const;
  /// Inverse of coordinates().
  CMatrix compose(const CVector& coords) const;

  /// Tr(L_j L_j): n for the identity, 2 otherwise.
  double norm(int index) const { return index == 0 ? n_ : 2.0; }

 private:
  int n_;
  std::vector<CMatrix> generators_;
  std::vector<double> structure_;
};

/// Builds the n^2 generators and their structure constants. Rejects n < 2.
GeneratorSet build_generators(int n);

/// 0-based generator index of the diagonal generator for row k (k = 2..n).
constexpr int diagonal_index(int k) { return k * k - 1; }

/// Index of the raising operator |j><k| (1-based rows, j < k).
constexpr int ladder_index(int j, int k) { return (k - 1) * (k - 1) + 2 * (j - 1); }

struct LadderBasis {
  int n = 0;
  std::vector<CMatrix> operators;
  std::vector<int> csa_indices;

  bool is_csa(int index) const;
};

LadderBasis build_ladder_basis(int n);

struct AdjointMap {
  int n = 0;
  CMatrix matrix;
  Basis basis = Basis::generator;
};

/// Matrix of ad_H = [H, .] in the requested basis:
/// [H, B_k] = sum_j B_j matrix(j, k). Rejects non-Hermitian H.
AdjointMap adjoint_rep(const CMatrix& h, const GeneratorSet& gens,
                       Basis basis = Basis::generator,
                       double tolerance = kDefaultTolerance);

struct Root {
  int index = 0;   // ladder index of K_m
  int row = 0;     // K_m = |row><col| (1-based)
  int col = 0;
  RVector vector;  // alpha_m, coordinates along (lambda_3, lambda_8, ...)
  bool positive = false;
  bool simple = false;
};

struct RootSystem {
  int n = 0;
  std::vector<Root> roots;            // ordered by ladder index
  std::vector<int> positive_indices;  // ascending ladder index
  std::vector<int> simple_indices;    // ascending ladder index
  RMatrix change_matrix;              // rows are the simple roots
  double jacobian = 1.0;              // |det(change_matrix)|^{-1}

  const Root& root(int ladder_index) const;
  /// Expansion of alpha_m over the simple roots (nonnegative integers for
  /// positive roots), ordered like simple_indices.
  RVector simple_coordinates(int ladder_index) const;
  /// Ladder index of the root with opposite sign.
  int opposite(int ladder_index) const;
};

/// Root system of su(n) measured from [H_lambda, K_m] = (alpha_m . lambda) K_m
/// with H_lambda = sum_k lambda_{k^2-1} L_{k^2-1} / 2.
///
/// A root is positive when its last nonzero coordinate (in the order
/// lambda_3, lambda_8, lambda_15, ...) is positive; this selects exactly the
/// raising operators |j><k|, j < k. Simple roots are the positive roots that
/// are not a sum of two positive roots.
RootSystem root_system(int n, double tolerance = kDefaultTolerance);

struct Diagonalizer {
  CMatrix forward;  // X: generator coordinates -> ladder coordinates
  CMatrix inverse;  // X^{-1}
};

/// Change of basis that simultaneously diagonalizes the adjoint
/// representation of every Cartan element.
Diagonalizer simultaneous_diagonalizer(int n);

/// Commutator [a, b].
CMatrix commutator(const CMatrix& a, const CMatrix& b);

}  // namespace cher
