#pragma once

// Data-parallel numerical kernels. Every routine exists twice: an OpenMP
// version used by the library (namespace `parallel`) and a plain serial
// reference (namespace `serial`) that the tests compare against. Both
// namespaces expose identical signatures.

#include <span>
#include <vector>

#include "cher/common.hpp"

namespace cher::kernels {

/// Lattice consumed by forward_projection:
/// point(i) = origin + sum_d i_d * basis.col(d), i_d in [0, counts[d]),
/// values stored row-major (last axis fastest).
struct LatticeView {
  RVector origin;
  RMatrix basis;
  std::vector<int> counts;
};

namespace parallel {

/// out(x) = (dt / 2pi) sum_{|k| < K} s_k e^{i x k dt} with s_{-k} = conj(s_k).
/// `samples` holds s_0 .. s_{K-1}; quadrature weights and windows are applied
/// by the caller.
void inverse_hermitian_1d(double dt, std::span<const Complex> samples, std::span<const double> x,
                          std::span<double> out);

/// out(t) = dx * sum_j density_j e^{-i x_j t}
void forward_1d(std::span<const double> x, std::span<const double> density, double dx,
                std::span<const double> t, std::span<Complex> out);

/// out(j, l) = (dt^2 / 4pi^2) sum_{k,m} kernel(k, m) e^{i (x1_j t_k + x2_l t_m)},
/// t_k = (k - h) dt with h = (kernel.rows() - 1) / 2 (square, odd-sized kernel).
CMatrix inverse_2d(double dt, const CMatrix& kernel, std::span<const double> x1,
                   std::span<const double> x2);

/// out(t) = cell_volume * sum_i values_i exp(-i (direction . point_i) t)
void forward_projection(const LatticeView& lattice, std::span<const double> values, double cell_volume,
                        const RVector& direction, std::span<const double> t, std::span<Complex> out);

/// cell_volume * sum_i max(-values_i, 0)
double negative_mass(std::span<const double> values, double cell_volume);

/// phi_out(t) = sum_k a_k (1 - cos w_k t), theta_out(t) = sum_k b_k (w_k t - sin w_k t)
void mode_sums(std::span<const double> freqs, std::span<const double> phi_weights,
               std::span<const double> theta_weights, std::span<const double> t,
               std::span<double> phi_out, std::span<double> theta_out);

}  // namespace parallel

namespace serial {

void inverse_hermitian_1d(double dt, std::span<const Complex> samples, std::span<const double> x,
                          std::span<double> out);
void forward_1d(std::span<const double> x, std::span<const double> density, double dx,
                std::span<const double> t, std::span<Complex> out);
CMatrix inverse_2d(double dt, const CMatrix& kernel, std::span<const double> x1,
                   std::span<const double> x2);
void forward_projection(const LatticeView& lattice, std::span<const double> values, double cell_volume,
                        const RVector& direction, std::span<const double> t, std::span<Complex> out);
double negative_mass(std::span<const double> values, double cell_volume);
void mode_sums(std::span<const double> freqs, std::span<const double> phi_weights,
               std::span<const double> theta_weights, std::span<const double> t,
               std::span<double> phi_out, std::span<double> theta_out);

}  // namespace serial

/// Number of OpenMP threads available to the parallel kernels.
int thread_count();

}  // namespace cher::kernels
