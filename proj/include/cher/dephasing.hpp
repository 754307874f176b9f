#pragma once

// Pure-dephasing dynamical maps in three equivalent forms: dephasing factors
// on the positive root spaces, the generator-basis superoperator, and the
// process (chi) matrix.

#include <map>
#include <string>
#include <vector>

#include "cher/common.hpp"
#include "cher/lie.hpp"

namespace cher {

/// Ladder indices of the positive roots of su(n), ascending.
std::vector<int> positive_root_indices(int n);

struct DephasingFactors {
  int n = 0;
  std::vector<double> times;
  std::map<int, std::vector<Complex>> factors;  // positive-root ladder index -> phi_m(t)
  std::string time_unit = "1/wc";

  DephasingFactors() = default;
  /// Validates the grid, the modulus bound and phi(0) = 1; the t = 0 sample
  /// is then set to exactly 1.
  DephasingFactors(int n, std::vector<double> times, std::map<int, std::vector<Complex>> factors,
                   double tolerance = 1e-9);

  const std::vector<Complex>& at(int index) const;
  /// phi_m for a positive index, conj(phi_m') for the opposite negative index,
  /// 1 for the identity and Cartan directions.
  Complex value(int ladder_index, std::size_t time_index) const;
};

/// Pointwise product; both operands must share n and the time grid exactly.
DephasingFactors multiply(const DephasingFactors& a, const DephasingFactors& b);

/// Linear interpolation of every factor onto `times` (must lie inside the
/// source grid and start at 0).
DephasingFactors resample_linear(const DephasingFactors& f, const std::vector<double>& times);

struct DynamicalMapSeries {
  int n = 0;
  std::vector<double> times;
  std::vector<CMatrix> maps;  // generator basis, acting on {1/n, rho_vec}
  double cp_violation = 0.0;  // max(0, -min eig chi) when built from chi data
};

DynamicalMapSeries map_from_factors(const DephasingFactors& f);

/// Time-wise product a(t) b(t).
DynamicalMapSeries compose(const DynamicalMapSeries& a, const DynamicalMapSeries& b);

/// Evolves a density matrix; rejects non-states with the violated property.
std::vector<CMatrix> apply_map(const DynamicalMapSeries& map, const CMatrix& rho0, double tolerance = 1e-9);

/// Smallest eigenvalue of the Choi matrix sum_ab |a><b| (x) E(|a><b|).
double choi_min_eigenvalue(const CMatrix& generator_map, const GeneratorSet& gens);

struct ChiSeries {
  int n = 0;
  std::vector<double> times;
  std::vector<CMatrix> chi;  // E(rho) = sum_lm chi_lm L_l rho L_m
};

DynamicalMapSeries reconstruct_from_chi(const ChiSeries& c, const GeneratorSet& gens);
ChiSeries chi_from_map(const DynamicalMapSeries& map, const GeneratorSet& gens);

/// chi_00 + (2/n) sum_{l>=1} chi_ll, the trace-direction map element.
Complex chi_identity_element(const CMatrix& chi, int n);

struct PureDephasingCheck {
  double max_offdiagonal = 0.0;  // relative Frobenius mass in the ladder basis
  std::size_t worst_time = 0;
};

/// Throws NumericalError("not pure dephasing ...") when the ladder-basis
/// off-diagonal mass exceeds `threshold` at any time, or a Cartan direction
/// deviates from 1 by more than `threshold`.
DephasingFactors factors_from_map(const DynamicalMapSeries& map, double threshold = 1e-8,
                                  PureDephasingCheck* check = nullptr);

}  // namespace cher
