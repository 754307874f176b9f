#pragma once

// Brute-force spin-boson simulator with finitely many boson modes. Each
// qubit configuration z displaces every mode by Z_k(z) = sum_j g_jk s_j
// (s = +1 for up), so coherences factorize over modes.

#include <string>
#include <vector>

#include "cher/common.hpp"
#include "cher/dephasing.hpp"
#include "cher/spin_boson.hpp"

namespace cher {

struct Mode {
  double omega = 1.0;
  Complex g1 = 0.0;
  Complex g2 = 0.0;
};

struct ModeConfig {
  enum class Method { analytic_displacement, truncated_fock };

  std::vector<Mode> modes;
  int qubits = 2;  // 1 ignores g2 and yields n = 2 factors
  int fock_cutoff = 40;
  double temperature = 0.0;
  Method method = Method::analytic_displacement;
  double max_hilbert_dim = 1e12;  // product of per-mode cutoffs times 2^qubits
  double leakage_tolerance = 1e-6;

  void validate() const;
};

std::string to_string(ModeConfig::Method m);
ModeConfig::Method parse_method(const std::string& name);

struct DiscretizedBath {
  std::vector<double> omega;
  std::vector<double> weight;  // quadrature weights; g_k^2 = J(omega_k) * weight_k
};

/// Gauss-Legendre nodes on [0, 30 omega_c] (or the table span).
DiscretizedBath discretize_bath(const SpectralDensity& sd, int n_modes);

/// Modes with g_1k = sqrt(J w) * scale and g_2k = g_1k * e^{i phi_rel}.
ModeConfig modes_from_bath(const DiscretizedBath& bath, const SpectralDensity& sd, double scale = 1.0,
                           double phi_rel = 0.0);

/// Discrete-mode Phi(t) = 4 sum_k g_k^2 coth(w_k/2T) (1 - cos w_k t) / w_k^2.
std::vector<double> discrete_phi(const DiscretizedBath& bath, const SpectralDensity& sd, double temperature,
                                 const std::vector<double>& times);

struct OracleReport {
  double max_leakage = 0.0;  // largest top-Fock-level population seen
};

/// Qubit coherence factors C(a, b)(t) = prod_k Tr[U_a rho_k U_b^dagger] for all
/// positive roots (basis order up-up, up-down, down-up, down-down, or up, down).
DephasingFactors reduced_coherences(const ModeConfig& cfg, const std::vector<double>& times,
                                    OracleReport* report = nullptr);

/// Single-mode coherence between displacements z_a and z_b (analytic path).
Complex mode_coherence_analytic(double omega, Complex za, Complex zb, double temperature, double t);

}  // namespace cher
