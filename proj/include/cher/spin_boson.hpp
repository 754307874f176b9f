#pragma once

// Dephasing phase theta(t) and decoherence function Phi(t) of the
// spin-boson pure-dephasing model, and the model dephasing factors built
// from them. Units: k_B = hbar = 1.

#include <utility>
#include <vector>

#include "cher/common.hpp"
#include "cher/dephasing.hpp"

namespace cher {

struct SpectralDensity {
  enum class Kind { ohmic, tabulated };

  Kind kind = Kind::ohmic;
  double cutoff = 1.0;                            // omega_c for the Ohmic kind
  std::vector<std::pair<double, double>> table;  // (omega, J) for the tabulated kind

  static SpectralDensity ohmic(double cutoff);
  /// Linear interpolation between rows, zero outside the table.
  static SpectralDensity tabulated(std::vector<std::pair<double, double>> rows);

  double operator()(double omega) const;
  /// Upper integration limit: 50 omega_c, or the last table node.
  double max_frequency() const;
};

struct BathParams {
  double temperature = 0.0;  // 0 selects the zero-temperature limit
  double coupling_prefactor = 1.0;
};

struct ModelFactors {
  std::vector<double> times;
  std::vector<double> theta;
  std::vector<double> phi_fn;  // Phi(t)
};

struct QuadratureOptions {
  double tolerance = 1e-10;  // absolute, per time point
  unsigned max_depth = 8;
  double tail_tolerance = 1e-12;
};

/// theta(t) = 4 c int J/w^2 (w t - sin w t) dw,
/// Phi(t)   = 4 c int J/w^2 coth(w / 2T) (1 - cos w t) dw,
/// with c the coupling prefactor, by adaptive Gauss-Kronrod quadrature on
/// [0, max_frequency]. Throws NumericalError naming the worst t when the
/// error estimate exceeds the tolerance.
ModelFactors compute_theta_phi(const SpectralDensity& sd, const BathParams& bath, const std::vector<double>& times,
                               const QuadratureOptions& options = {});

/// Equal-coupling qubit pair sharing one bath:
/// phi_1 = phi_4 = e^{i theta - Phi}, phi_6 = 1, phi_9 = e^{-4 Phi},
/// phi_11 = phi_13 = e^{-i theta - Phi}.
DephasingFactors qubit_pair_factors(const ModelFactors& m);
DephasingFactors qubit_pair_factors(const SpectralDensity& sd, const BathParams& bath,
                                    const std::vector<double>& times);

/// phi(t) = e^{-i theta(t) - Phi(t)}.
DephasingFactors single_qubit_factor(const ModelFactors& m);

struct RelativePhaseConfig {
  SpectralDensity sd = SpectralDensity::ohmic(1.0);
  BathParams bath;
  int n_modes = 256;
  double coupling_scale = 1.0;                     // free overall g magnitude
  std::pair<double, double> partner_populations{0.5, 0.5};  // qubit 2 (up, down)
};

/// Reduced factor of qubit 1 when qubit 2 couples with g_2k = g_1k e^{i phi_rel}:
/// p_up * C(up up, down up) + p_down * C(up down, down down), evaluated with
/// the discrete-mode oracle.
DephasingFactors relative_phase_factor(double phi_rel, const RelativePhaseConfig& cfg,
                                       const std::vector<double>& times);

}  // namespace cher
