#pragma once

// Free-induction-decay tomography of a singlet-triplet (S-T0) qubit:
// simulation of the three return probabilities, rotation-axis
// identification, recovery of p(omega) and a Gaussian-noise study.
//
// Measurement states: |X> = (S + T0)/sqrt2, |Y> = (S - i T0)/sqrt2, |Z> = S.
// Units: energies in micro-eV, times in ns, fields in tesla.

#include <array>
#include <cstdint>
#include <vector>

#include "cher/common.hpp"
#include "cher/nonclassicality.hpp"
#include "cher/quasi.hpp"
#include "cher/retrieval.hpp"

namespace cher {

inline constexpr double kHbarMicroEvNs = 0.6582119569;

struct ST0Params {
  double j = 0.37;         // exchange, micro-eV
  double delta_b = 10.5e-3;  // hyperfine gradient, T
  double g_factor = -0.44;
  double mu_b = 57.8;      // micro-eV / T
  double t2star = 30.0;    // ns
  double hbar = kHbarMicroEvNs;
  std::array<double, 3> initial{0.0, -1.0, 0.0};  // Bloch vector in the measurement frame

  void validate() const;
  /// sqrt(J^2 + (2 g mu_B dB)^2) / hbar in rad/ns.
  double omega() const;
  /// Angle between the rotation axis and |S>, in radians, in the measurement frame.
  double tilt() const;
};

struct ReturnProbabilities {
  std::vector<double> tau;
  std::vector<double> px, py, pz;
};

struct Trajectory {
  std::vector<double> tau;
  std::vector<std::array<double, 3>> r;
};

/// Default delay grid 0, 0.1, ..., 120 ns.
std::vector<double> default_tau_grid();

ReturnProbabilities simulate_return_probs(const ST0Params& params, const std::vector<double>& tau);

Trajectory to_trajectory(const ReturnProbabilities& p);

struct AxisFit {
  double tilt = 0.0;   // Omega, radians
  double omega = 0.0;  // rad/ns
  std::array<double, 3> normal{0.0, 0.0, 1.0};
  std::array<double, 3> centroid{0.0, 0.0, 0.0};
};

/// Least-squares plane through the trajectory (normal oriented towards +Z)
/// and the rotation frequency from the phase progression inside the plane.
AxisFit identify_axis(const Trajectory& traj);

/// Dephasing factor phi(tau) = -r_y' - i r_x' of the trajectory rotated by
/// R_Omega. With `project_to_disk`, points are first projected onto the
/// fitted plane and clamped radially to the unit disk.
std::vector<Complex> recover_factor(const Trajectory& traj, const AxisFit& axis, bool project_to_disk);

QuasiDistribution recover_distribution(const Trajectory& traj, const AxisFit& axis, bool project_to_disk = false,
                                       const Inversion1DOptions& options = {}, InversionReport* report = nullptr);

/// Inversion settings for noisy trajectories: raised-cosine tail window on.
Inversion1DOptions noisy_inversion_defaults();

struct NoiseConfig {
  double sigma = 0.05;
  int repeats = 200;
  std::uint64_t seed = 1;
  int smoothing_window = 7;  // odd, points per local quadratic fit
  Inversion1DOptions inversion = noisy_inversion_defaults();

  void validate() const;
};

/// Local quadratic least-squares smoothing over a sliding window of
/// `window` points (shifted inward at the edges).
std::vector<double> smooth_local_quadratic(const std::vector<double>& y, int window);

struct NoiseStudy {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> values;  // per successful repeat, in repeat order
  int failures = 0;
};

NoiseStudy noise_study(const ST0Params& params, const std::vector<double>& tau, const NoiseConfig& noise);

/// Nonclassicality of the noiseless recovery.
NonclassicalityResult noiseless_nonclassicality(const ST0Params& params, const std::vector<double>& tau,
                                                const Inversion1DOptions& options = {});

}  // namespace cher
