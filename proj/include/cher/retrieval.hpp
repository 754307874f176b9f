#pragma once

// Inversion of dephasing factors into the canonical Hamiltonian-ensemble
// quasi-distribution, and the forward transform used to check it.

#include <optional>
#include <string>
#include <vector>

#include "cher/common.hpp"
#include "cher/dephasing.hpp"
#include "cher/lie.hpp"
#include "cher/quasi.hpp"
#include "cher/spin_boson.hpp"

namespace cher {

struct InversionReport {
  std::string strategy;
  double t_max = 0.0;
  double dt = 0.0;
  std::size_t samples = 0;
  bool windowed = false;
  double window_fraction = 0.0;
  double tail_modulus = 0.0;      // |phi(T_max)|
  double max_imag_residue = 0.0;  // relative to the largest |value|
  double mass_defect = 0.0;       // |1 - integral|
  std::vector<std::pair<std::string, double>> forward_residuals;  // (factor, max abs error)
};

/// Uniform grid 0, dt, ..., t_max with `samples` points.
std::vector<double> uniform_time_grid(double t_max, std::size_t samples);

struct Inversion1DOptions {
  double tail_threshold = 1e-3;
  bool window = false;          // raised-cosine taper over the last window_fraction of [0, T_max]
  double window_fraction = 0.25;
  double delta_tolerance = 1e-10;
  /// Output grid: step = pi / T_max / refine over a span of 2 pi / dt centred
  /// on `center`. refine = 1 makes the grid conjugate to the time grid.
  int refine = 1;
  double center = 0.0;
  bool forward_check = true;
};

struct DeltaFit {
  double location = 0.0;
  double residual = 0.0;  // sup_t |phi(t) - e^{-i c t}|
};

/// Best real c with phi(t) ~ e^{-i c t} by phase regression; returned only if
/// the sup residual is below `tolerance`.
std::optional<DeltaFit> detect_delta(const std::vector<double>& times, const std::vector<Complex>& phi,
                                     double tolerance = 1e-10);

/// p(x) = (1/2pi) int phi(t) e^{ixt} dt with phi(-t) = conj(phi(t)), by a
/// trapezoid sum on the (uniform) input grid. Constant-modulus-one phases are
/// returned as a delta factor instead.
QuasiDistribution invert_1d(const std::vector<double>& times, const std::vector<Complex>& phi,
                            const std::string& label = "x1", const Inversion1DOptions& options = {},
                            InversionReport* report = nullptr);

struct PairInversionOptions {
  int half_samples = 512;  // kernel grid t_k = k T/N, k = -N..N
  double t_max = 40.0;     // in units of 1/omega_c
  double consistency_tolerance = 1e-10;
  bool forward_check = true;
};

/// Two-time ansatz kernel K(t1, t13) = exp[i theta(t1 - t13) - Psi(t1, t13)]
/// of the equal-coupling Ohmic zero-temperature qubit pair.
Complex pair_kernel(double t1, double t13, double cutoff);

/// Correlated inversion of the qubit-pair factors into a dense density over
/// (x1, x13) times delta(x6). Gated to Ohmic spectral densities at T = 0 and
/// equal couplings; other regimes raise "no inversion strategy".
QuasiDistribution invert_pair_correlated(const DephasingFactors& factors, const SpectralDensity& sd,
                                         const BathParams& bath, const PairInversionOptions& options = {},
                                         InversionReport* report = nullptr);

/// phi_m(t) = int p(lambda) e^{-i (alpha_m . lambda) t} for every positive root.
/// Dense axes and deltas are labelled x<m> (simple-root space) or lambda<k>
/// (lambda space, k = 3, 8, 15, ...).
DephasingFactors forward_transform(const QuasiDistribution& q, const RootSystem& roots,
                                   const std::vector<double>& times);

/// lambda-space density re-expressed in simple-root coordinates x = C lambda,
/// C = change_matrix; values are multiplied by the Jacobian |det C|^{-1}.
QuasiDistribution change_variables(const QuasiDistribution& q, const RootSystem& roots);

/// Inverse of change_variables.
QuasiDistribution to_lambda_space(const QuasiDistribution& q, const RootSystem& roots);

/// Ladder index encoded in an axis label such as "x13".
int label_index(const std::string& label);

}  // namespace cher
