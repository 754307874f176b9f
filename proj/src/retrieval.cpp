#include "cher/retrieval.hpp"

#include <algorithm>
#include <cmath>

#include "cher/kernels.hpp"

namespace cher {

namespace {

double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> unwrapped_phase(const std::vector<Complex>& phi) {
  std::vector<double> out(phi.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double a = std::arg(phi[i]);
    if (i > 0) {
      double jump = a + offset - out[i - 1];
      while (jump > kPi) {
        offset -= 2.0 * kPi;
        jump -= 2.0 * kPi;
      }
      while (jump < -kPi) {
        offset += 2.0 * kPi;
        jump += 2.0 * kPi;
      }
    }
    out[i] = a + offset;
  }
  return out;
}

double raised_cosine(double t, double t_max, double fraction) {
  const double start = (1.0 - fraction) * t_max;
  if (t <= start || fraction <= 0.0) return 1.0;
  return 0.5 * (1.0 + std::cos(kPi * (t - start) / (t_max - start)));
}

// theta(t) = 4 (wc t - arctan(wc t)) of the Ohmic zero-temperature bath.
double ohmic_theta(double t, double wc) { return 4.0 * (wc * t - std::atan(wc * t)); }

}  // namespace

std::vector<double> uniform_time_grid(double t_max, std::size_t samples) {
  require(t_max > 0.0 && samples >= 2, "time grid needs t_max > 0 and at least two samples");
  std::vector<double> t(samples);
  const double dt = t_max / static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) t[i] = dt * static_cast<double>(i);
  t.back() = t_max;
  return t;
}

int label_index(const std::string& label) {
  std::size_t pos = 0;
  while (pos < label.size() && !std::isdigit(static_cast<unsigned char>(label[pos]))) ++pos;
  require(pos < label.size(), "axis label '" + label + "' carries no root index");
  return std::stoi(label.substr(pos));
}

std::optional<DeltaFit> detect_delta(const std::vector<double>& times, const std::vector<Complex>& phi,
                                     double tolerance) {
  require(times.size() == phi.size() && !times.empty(), "detect_delta: size mismatch");
  for (const auto& p : phi) {
    if (std::abs(std::abs(p) - 1.0) > tolerance) return std::nullopt;
  }
  const auto phase = unwrapped_phase(phi);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    num += times[i] * phase[i];
    den += times[i] * times[i];
  }
  const double c = den > 0.0 ? -num / den : 0.0;
  double residual = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    residual = std::max(residual, std::abs(phi[i] - std::polar(1.0, -c * times[i])));
  }
  if (residual >= tolerance) return std::nullopt;
  return DeltaFit{c, residual};
}

QuasiDistribution invert_1d(const std::vector<double>& times, const std::vector<Complex>& phi, const std::string& label,
                            const Inversion1DOptions& options, InversionReport* report) {
  require(times.size() == phi.size(), "invert_1d: factor length does not match the time grid");
  require(is_time_grid(times) && is_uniform_grid(times), "invert_1d needs a uniform grid starting at 0");
  require(std::abs(phi[0] - 1.0) <= 1e-9, "invert_1d: factor is not 1 at t = 0");
  require(options.refine >= 1, "refine must be at least 1");
  InversionReport rep;
  const std::size_t k = times.size();
  rep.t_max = times.back();
  rep.samples = k;
  rep.dt = rep.t_max / static_cast<double>(k - 1);
  rep.tail_modulus = std::abs(phi.back());

  if (const auto delta = detect_delta(times, phi, options.delta_tolerance)) {
    rep.strategy = "delta";
    if (report) *report = rep;
    return QuasiDistribution::point_masses(CoordinateSpace::simple_root, {{label, delta->location, 1.0}});
  }
  if (rep.tail_modulus > options.tail_threshold && !options.window) {
    throw ValidationError("insufficient decay: |phi(T_max)| = " + std::to_string(rep.tail_modulus) +
                          " exceeds the tail threshold; extend the grid or enable the window");
  }

  rep.strategy = "fourier-1d";
  rep.windowed = options.window;
  rep.window_fraction = options.window ? options.window_fraction : 0.0;
  std::vector<Complex> samples(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double w = (i + 1 == k) ? 0.5 : 1.0;
    const double taper = options.window ? raised_cosine(times[i], rep.t_max, options.window_fraction) : 1.0;
    samples[i] = w * taper * phi[i];
  }

  const std::size_t m = 2 * (k - 1) * static_cast<std::size_t>(options.refine);
  const double dx = kPi / rep.t_max / options.refine;
  const double x0 = options.center - kPi / rep.dt;
  std::vector<double> x(m), density(m);
  for (std::size_t j = 0; j < m; ++j) x[j] = x0 + dx * static_cast<double>(j);
  kernels::parallel::inverse_hermitian_1d(rep.dt, samples, x, density);

  auto q = QuasiDistribution::on_grid(CoordinateSpace::simple_root, {label}, {x0}, {dx}, {static_cast<int>(m)},
                                      std::move(density));
  rep.mass_defect = std::abs(1.0 - q.mass());
  if (options.forward_check) {
    std::vector<Complex> back(k);
    kernels::parallel::forward_1d(x, q.values, dx, times, back);
    rep.forward_residuals.emplace_back(label, max_abs_diff(back, phi));
  }
  if (report) *report = rep;
  return q;
}

Complex pair_kernel(double t1, double t13, double cutoff) {
  const double s = t1 + t13;
  const double tau = s == 0.0 ? 1.0 : std::pow(2.0, 8.0 * t1 * t13 / (s * s));
  // tau -> 0 near the anti-diagonal t1 = -t13, where tau ln(1 + s^2 / tau) -> 0.
  const double psi = tau == 0.0 ? 0.0 : 2.0 * tau * std::log1p(cutoff * cutoff * s * s / tau);
  return std::exp(Complex(-psi, ohmic_theta(t1 - t13, cutoff)));
}

QuasiDistribution invert_pair_correlated(const DephasingFactors& factors, const SpectralDensity& sd,
                                         const BathParams& bath, const PairInversionOptions& options,
                                         InversionReport* report) {
  if (factors.n != 4 || sd.kind != SpectralDensity::Kind::ohmic || bath.temperature != 0.0 ||
      bath.coupling_prefactor != 1.0) {
    throw ValidationError("no inversion strategy: the correlated pair ansatz needs n = 4, an Ohmic bath at T = 0 "
                          "and unit coupling prefactor");
  }
  require(options.half_samples >= 2 && options.t_max > 0.0, "pair inversion grid is empty");
  const double wc = sd.cutoff;
  const auto& times = factors.times;
  const double tol = options.consistency_tolerance;

  if (max_abs_diff(factors.at(1), factors.at(4)) > tol || max_abs_diff(factors.at(11), factors.at(13)) > tol) {
    throw ValidationError("no inversion strategy: factors do not have equal couplings (phi1 != phi4 or phi11 != phi13)");
  }
  const auto delta6 = detect_delta(times, factors.at(6), tol);
  if (!delta6) throw ValidationError("no inversion strategy: phi6 is not a pure phase");

  const struct {
    const char* name;
    int index;
    double a, b;
  } slices[] = {{"(t, 0) vs phi1", 1, 1.0, 0.0}, {"(0, t) vs phi13", 13, 0.0, 1.0}, {"(t, t) vs phi9", 9, 1.0, 1.0}};
  for (const auto& s : slices) {
    const auto& f = factors.at(s.index);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double err = std::abs(pair_kernel(s.a * times[i], s.b * times[i], wc) - f[i]);
      if (err > tol) {
        throw NumericalError(std::string("ansatz consistency failure on slice ") + s.name + " at t = " +
                             std::to_string(times[i]) + " (error " + std::to_string(err) + ")");
      }
    }
  }

  InversionReport rep;
  rep.strategy = "pair-ansatz-2d";
  const int n = options.half_samples;
  const int m = 2 * n + 1;
  rep.t_max = options.t_max / wc;
  rep.dt = rep.t_max / n;
  rep.samples = static_cast<std::size_t>(m);
  rep.tail_modulus = std::abs(pair_kernel(rep.t_max, 0.0, wc));

  CMatrix kernel(m, m);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < m; ++a) {
    const double wa = (a == 0 || a == m - 1) ? 0.5 : 1.0;
    for (int b = 0; b < m; ++b) {
      const double wb = (b == 0 || b == m - 1) ? 0.5 : 1.0;
      kernel(a, b) = wa * wb * pair_kernel((a - n) * rep.dt, (b - n) * rep.dt, wc);
    }
  }
  const double dx = 2.0 * kPi / (m * rep.dt);
  std::vector<double> x(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) x[static_cast<std::size_t>(j)] = (j - n) * dx;
  const CMatrix full = kernels::parallel::inverse_2d(rep.dt, kernel, x, x);

  const double scale = full.real().cwiseAbs().maxCoeff();
  rep.max_imag_residue = full.imag().cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
  if (rep.max_imag_residue > 1e-8) {
    throw NumericalError("pair inversion left an imaginary residue of " + std::to_string(rep.max_imag_residue));
  }
  std::vector<double> values(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) values[static_cast<std::size_t>(a) * m + b] = full(a, b).real();
  }
  auto q = QuasiDistribution::on_grid(CoordinateSpace::simple_root, {"x1", "x13"}, {x[0], x[0]}, {dx, dx}, {m, m},
                                      std::move(values));
  q.deltas.push_back({"x6", delta6->location, 1.0});
  rep.mass_defect = std::abs(1.0 - q.mass());

  if (options.forward_check) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = k * rep.dt;
    const struct {
      const char* name;
      double a, b;
    } dirs[] = {{"phi1", 1.0, 0.0}, {"phi13", 0.0, 1.0}, {"phi9", 1.0, 1.0}};
    for (const auto& d : dirs) {
      RVector dir(2);
      dir << d.a, d.b;
      std::vector<Complex> back(t.size());
      kernels::parallel::forward_projection(q.lattice(), q.values, q.cell_volume(), dir, t, back);
      double err = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        err = std::max(err, std::abs(back[k] - pair_kernel(d.a * t[k], d.b * t[k], wc)));
      }
      rep.forward_residuals.emplace_back(d.name, err);
    }
  }
  if (report) *report = rep;
  return q;
}

DephasingFactors forward_transform(const QuasiDistribution& q, const RootSystem& roots,
                                   const std::vector<double>& times) {
  q.validate();
  const int n = roots.n;
  std::vector<int> dense_slot(q.labels.size()), delta_slot(q.deltas.size());
  std::vector<bool> covered(static_cast<std::size_t>(n - 1), false);
  const auto locate = [&](const std::string& label) {
    const int idx = label_index(label);
    int slot = -1;
    if (q.space == CoordinateSpace::simple_root) {
      const auto it = std::find(roots.simple_indices.begin(), roots.simple_indices.end(), idx);
      if (it != roots.simple_indices.end()) slot = static_cast<int>(it - roots.simple_indices.begin());
    } else {
      for (int k = 2; k <= n; ++k) {
        if (diagonal_index(k) == idx) slot = k - 2;
      }
    }
    if (slot < 0 || covered[static_cast<std::size_t>(slot)]) {
      throw ValidationError("axis '" + label + "' does not match a free coordinate of su(" + std::to_string(n) + ")");
    }
    covered[static_cast<std::size_t>(slot)] = true;
    return slot;
  };
  for (std::size_t d = 0; d < q.labels.size(); ++d) dense_slot[d] = locate(q.labels[d]);
  for (std::size_t d = 0; d < q.deltas.size(); ++d) delta_slot[d] = locate(q.deltas[d].label);
  if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
    throw ValidationError("distribution does not cover every coordinate of su(" + std::to_string(n) + ")");
  }

  std::map<int, std::vector<Complex>> out;
  for (int m : roots.positive_indices) {
    const RVector coeff =
        q.space == CoordinateSpace::simple_root ? roots.simple_coordinates(m) : roots.root(m).vector;
    RVector dir(q.dims());
    for (int d = 0; d < q.dims(); ++d) dir(d) = coeff(dense_slot[static_cast<std::size_t>(d)]);
    std::vector<Complex> phi(times.size(), 1.0);
    if (q.dims() > 0) {
      kernels::parallel::forward_projection(q.lattice(), q.values, q.cell_volume(), dir, times, phi);
    } else {
      for (auto& p : phi) p = q.values[0];
    }
    for (std::size_t d = 0; d < q.deltas.size(); ++d) {
      const double rate = coeff(delta_slot[d]) * q.deltas[d].location;
      for (std::size_t i = 0; i < times.size(); ++i) phi[i] *= q.deltas[d].mass * std::polar(1.0, -rate * times[i]);
    }
    out.emplace(m, std::move(phi));
  }
  return DephasingFactors(n, times, std::move(out), 1e-6);
}

QuasiDistribution change_variables(const QuasiDistribution& q, const RootSystem& roots) {
  require(q.space == CoordinateSpace::lambda, "change_variables expects a lambda-space distribution");
  require(q.deltas.empty(), "change_variables does not transform delta factors");
  require(q.dims() == roots.n - 1, "distribution dimension does not match the Cartan subalgebra");
  for (int d = 0; d < q.dims(); ++d) {
    require(label_index(q.labels[static_cast<std::size_t>(d)]) == diagonal_index(d + 2),
            "lambda axes must be ordered lambda3, lambda8, ...");
  }
  const double det = roots.change_matrix.determinant();
  if (std::abs(det) < 1e-12) throw ValidationError("change matrix is singular");
  QuasiDistribution out = q;
  out.space = CoordinateSpace::simple_root;
  out.origin = roots.change_matrix * q.origin;
  out.basis = roots.change_matrix * q.basis;
  for (auto& v : out.values) v *= roots.jacobian;
  for (int d = 0; d < q.dims(); ++d) {
    out.labels[static_cast<std::size_t>(d)] = "x" + std::to_string(roots.simple_indices[static_cast<std::size_t>(d)]);
  }
  return out;
}

QuasiDistribution to_lambda_space(const QuasiDistribution& q, const RootSystem& roots) {
  require(q.space == CoordinateSpace::simple_root, "to_lambda_space expects a simple-root distribution");
  require(q.deltas.empty(), "to_lambda_space does not transform delta factors");
  require(q.dims() == roots.n - 1, "distribution dimension does not match the Cartan subalgebra");
  for (int d = 0; d < q.dims(); ++d) {
    require(label_index(q.labels[static_cast<std::size_t>(d)]) == roots.simple_indices[static_cast<std::size_t>(d)],
            "simple-root axes must follow the simple-root order");
  }
  const RMatrix inverse = roots.change_matrix.inverse();
  QuasiDistribution out = q;
  out.space = CoordinateSpace::lambda;
  out.origin = inverse * q.origin;
  out.basis = inverse * q.basis;
  for (auto& v : out.values) v /= roots.jacobian;
  for (int d = 0; d < q.dims(); ++d) out.labels[static_cast<std::size_t>(d)] = "lambda" + std::to_string(diagonal_index(d + 2));
  return out;
}

}  // namespace cher
