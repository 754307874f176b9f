#include "cher/kernels.hpp"

#include <cmath>

#include <omp.h>

namespace cher::kernels {

namespace {

constexpr int kReseedInterval = 64;

// Contracts row-major `values` against one phase vector per axis.
Complex contract(const std::vector<int>& counts, std::span<const double> values,
                 const std::vector<std::vector<Complex>>& factors) {
  std::vector<Complex> work(values.begin(), values.end());
  std::size_t size = work.size();
  for (int d = static_cast<int>(counts.size()) - 1; d >= 0; --d) {
    const std::size_t len = static_cast<std::size_t>(counts[d]);
    const std::size_t outer = size / len;
    for (std::size_t o = 0; o < outer; ++o) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < len; ++i) acc += work[o * len + i] * factors[d][i];
      work[o] = acc;
    }
    size = outer;
  }
  return work[0];
}

std::vector<std::vector<Complex>> axis_phases(const LatticeView& lattice, const RVector& direction, double t) {
  std::vector<std::vector<Complex>> factors(lattice.counts.size());
  for (std::size_t d = 0; d < lattice.counts.size(); ++d) {
    const double rate = direction.dot(lattice.basis.col(static_cast<Eigen::Index>(d))) * t;
    factors[d].resize(static_cast<std::size_t>(lattice.counts[d]));
    for (int i = 0; i < lattice.counts[d]; ++i) factors[d][static_cast<std::size_t>(i)] = std::polar(1.0, -rate * i);
  }
  return factors;
}

void check_lattice(const LatticeView& lattice, std::size_t n_values) {
  std::size_t cells = 1;
  for (int c : lattice.counts) cells *= static_cast<std::size_t>(c);
  require(cells == n_values, "lattice cell count does not match value array");
  require(lattice.basis.cols() == static_cast<Eigen::Index>(lattice.counts.size()), "lattice basis/count mismatch");
}

}  // namespace

int thread_count() { return omp_get_max_threads(); }

namespace parallel {

void inverse_hermitian_1d(double dt, std::span<const Complex> samples, std::span<const double> x,
                          std::span<double> out) {
  require(out.size() == x.size(), "inverse_hermitian_1d: output size mismatch");
  const std::int64_t nx = static_cast<std::int64_t>(x.size());
  const std::size_t ns = samples.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < nx; ++j) {
    const double xj = x[static_cast<std::size_t>(j)];
    const Complex step = std::polar(1.0, xj * dt);
    double acc = 0.0;
    Complex phase = 1.0;
    for (std::size_t k = 1; k < ns; ++k) {
      if (k % kReseedInterval == 0) {
        phase = std::polar(1.0, xj * dt * static_cast<double>(k));
      } else {
        phase *= step;
      }
      const Complex term = samples[k] * phase;
      acc += term.real();
    }
    out[static_cast<std::size_t>(j)] = dt / (2.0 * kPi) * (samples[0].real() + 2.0 * acc);
  }
}

void forward_1d(std::span<const double> x, std::span<const double> density, double dx,
                std::span<const double> t, std::span<Complex> out) {
  require(x.size() == density.size() && out.size() == t.size(), "forward_1d: size mismatch");
  const std::int64_t nt = static_cast<std::int64_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < nt; ++k) {
    const double tk = t[static_cast<std::size_t>(k)];
    Complex acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += density[j] * std::polar(1.0, -x[j] * tk);
    out[static_cast<std::size_t>(k)] = acc * dx;
  }
}

CMatrix inverse_2d(double dt, const CMatrix& kernel, std::span<const double> x1, std::span<const double> x2) {
  require(kernel.rows() == kernel.cols() && kernel.rows() % 2 == 1, "inverse_2d: kernel must be square and odd-sized");
  const Eigen::Index m = kernel.rows();
  const double half = static_cast<double>((m - 1) / 2);
  const Eigen::Index n1 = static_cast<Eigen::Index>(x1.size());
  const Eigen::Index n2 = static_cast<Eigen::Index>(x2.size());
  CMatrix e1(n1, m), e2(m, n2);
#pragma omp parallel for schedule(static)
  for (Eigen::Index k = 0; k < m; ++k) {
    const double tk = (static_cast<double>(k) - half) * dt;
    for (Eigen::Index j = 0; j < n1; ++j) e1(j, k) = std::polar(1.0, x1[static_cast<std::size_t>(j)] * tk);
    for (Eigen::Index l = 0; l < n2; ++l) e2(k, l) = std::polar(1.0, x2[static_cast<std::size_t>(l)] * tk);
  }
  const CMatrix partial = kernel * e2;
  return (e1 * partial) * (dt * dt / (4.0 * kPi * kPi));
}

void forward_projection(const LatticeView& lattice, std::span<const double> values, double cell_volume,
                        const RVector& direction, std::span<const double> t, std::span<Complex> out) {
  check_lattice(lattice, values.size());
  require(out.size() == t.size(), "forward_projection: output size mismatch");
  const std::int64_t nt = static_cast<std::int64_t>(t.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t k = 0; k < nt; ++k) {
    const double tk = t[static_cast<std::size_t>(k)];
    const auto factors = axis_phases(lattice, direction, tk);
    const Complex offset = std::polar(1.0, -direction.dot(lattice.origin) * tk);
    out[static_cast<std::size_t>(k)] = cell_volume * offset * contract(lattice.counts, values, factors);
  }
}

double negative_mass(std::span<const double> values, double cell_volume) {
  double acc = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(values.size());
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = values[static_cast<std::size_t>(i)];
    if (v < 0.0) acc -= v;
  }
  return acc * cell_volume;
}

void mode_sums(std::span<const double> freqs, std::span<const double> phi_weights,
               std::span<const double> theta_weights, std::span<const double> t, std::span<double> phi_out,
               std::span<double> theta_out) {
  require(freqs.size() == phi_weights.size() && freqs.size() == theta_weights.size(), "mode_sums: mode size mismatch");
  require(phi_out.size() == t.size() && theta_out.size() == t.size(), "mode_sums: output size mismatch");
  const std::int64_t nt = static_cast<std::int64_t>(t.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < nt; ++k) {
    const double tk = t[static_cast<std::size_t>(k)];
    double phi = 0.0, theta = 0.0;
    for (std::size_t m = 0; m < freqs.size(); ++m) {
      const double x = freqs[m] * tk;
      phi += phi_weights[m] * one_minus_cos(x);
      theta += theta_weights[m] * x_minus_sin(x);
    }
    phi_out[static_cast<std::size_t>(k)] = phi;
    theta_out[static_cast<std::size_t>(k)] = theta;
  }
}

}  // namespace parallel

namespace serial {

void inverse_hermitian_1d(double dt, std::span<const Complex> samples, std::span<const double> x,
                          std::span<double> out) {
  require(out.size() == x.size(), "inverse_hermitian_1d: output size mismatch");
  const long ns = static_cast<long>(samples.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    Complex acc = 0.0;
    for (long k = -(ns - 1); k < ns; ++k) {
      const Complex s = k >= 0 ? samples[static_cast<std::size_t>(k)] : std::conj(samples[static_cast<std::size_t>(-k)]);
      acc += s * std::exp(Complex(0.0, x[j] * dt * static_cast<double>(k)));
    }
    out[j] = dt / (2.0 * kPi) * acc.real();
  }
}

void forward_1d(std::span<const double> x, std::span<const double> density, double dx,
                std::span<const double> t, std::span<Complex> out) {
  require(x.size() == density.size() && out.size() == t.size(), "forward_1d: size mismatch");
  for (std::size_t k = 0; k < t.size(); ++k) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += density[j] * std::exp(Complex(0.0, -x[j] * t[k]));
    out[k] = acc * dx;
  }
}

CMatrix inverse_2d(double dt, const CMatrix& kernel, std::span<const double> x1, std::span<const double> x2) {
  require(kernel.rows() == kernel.cols() && kernel.rows() % 2 == 1, "inverse_2d: kernel must be square and odd-sized");
  const Eigen::Index m = kernel.rows();
  const Eigen::Index half = (m - 1) / 2;
  const Eigen::Index n2 = static_cast<Eigen::Index>(x2.size());
  CMatrix partial = CMatrix::Zero(m, n2);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = 0; l < n2; ++l) {
      Complex acc = 0.0;
      for (Eigen::Index q = 0; q < m; ++q) {
        acc += kernel(k, q) * std::exp(Complex(0.0, x2[static_cast<std::size_t>(l)] * static_cast<double>(q - half) * dt));
      }
      partial(k, l) = acc;
    }
  }
  CMatrix out(static_cast<Eigen::Index>(x1.size()), n2);
  for (Eigen::Index j = 0; j < out.rows(); ++j) {
    for (Eigen::Index l = 0; l < n2; ++l) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        acc += std::exp(Complex(0.0, x1[static_cast<std::size_t>(j)] * static_cast<double>(k - half) * dt)) * partial(k, l);
      }
      out(j, l) = acc * dt * dt / (4.0 * kPi * kPi);
    }
  }
  return out;
}

void forward_projection(const LatticeView& lattice, std::span<const double> values, double cell_volume,
                        const RVector& direction, std::span<const double> t, std::span<Complex> out) {
  check_lattice(lattice, values.size());
  require(out.size() == t.size(), "forward_projection: output size mismatch");
  const std::size_t dims = lattice.counts.size();
  for (std::size_t k = 0; k < t.size(); ++k) {
    Complex acc = 0.0;
    std::vector<int> idx(dims, 0);
    for (std::size_t cell = 0; cell < values.size(); ++cell) {
      RVector point = lattice.origin;
      for (std::size_t d = 0; d < dims; ++d) point += lattice.basis.col(static_cast<Eigen::Index>(d)) * idx[d];
      acc += values[cell] * std::exp(Complex(0.0, -direction.dot(point) * t[k]));
      for (int d = static_cast<int>(dims) - 1; d >= 0; --d) {
        if (++idx[static_cast<std::size_t>(d)] < lattice.counts[static_cast<std::size_t>(d)]) break;
        idx[static_cast<std::size_t>(d)] = 0;
      }
    }
    out[k] = acc * cell_volume;
  }
}

double negative_mass(std::span<const double> values, double cell_volume) {
  double acc = 0.0;
  for (double v : values) acc += std::max(-v, 0.0);
  return acc * cell_volume;
}

void mode_sums(std::span<const double> freqs, std::span<const double> phi_weights,
               std::span<const double> theta_weights, std::span<const double> t, std::span<double> phi_out,
               std::span<double> theta_out) {
  require(freqs.size() == phi_weights.size() && freqs.size() == theta_weights.size(), "mode_sums: mode size mismatch");
  require(phi_out.size() == t.size() && theta_out.size() == t.size(), "mode_sums: output size mismatch");
  for (std::size_t k = 0; k < t.size(); ++k) {
    double phi = 0.0, theta = 0.0;
    for (std::size_t m = 0; m < freqs.size(); ++m) {
      const double x = freqs[m] * t[k];
      phi += phi_weights[m] * (1.0 - std::cos(x));
      theta += theta_weights[m] * (x - std::sin(x));
    }
    phi_out[k] = phi;
    theta_out[k] = theta;
  }
}

}  // namespace serial

}  // namespace cher::kernels
