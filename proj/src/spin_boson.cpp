#include "cher/spin_boson.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cher/mode_oracle.hpp"

namespace cher {

namespace {

using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;

double thermal_weight(double omega, double temperature) {
  if (temperature <= 0.0) return 1.0;
  return 1.0 / std::tanh(omega / (2.0 * temperature));
}

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

// Integrates f over consecutive pieces [nodes[k], nodes[k+1]], each split so
// that a sub-interval spans about two oscillation periods at time t.
template <class F>
Integral integrate_pieces(F f, const std::vector<double>& nodes, double t, const QuadratureOptions& options) {
  Integral total;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    const double a = nodes[k], b = nodes[k + 1];
    const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) * t / (4.0 * kPi))));
    const double width = (b - a) / chunks;
    for (int c = 0; c < chunks; ++c) {
      double err = 0.0;
      const double lo = a + c * width, hi = c + 1 == chunks ? b : a + (c + 1) * width;
      total.value += Quadrature::integrate(f, lo, hi, options.max_depth, 1e-11, &err);
      total.error += err;
    }
  }
  return total;
}

// Piece boundaries: the table nodes for tabulated densities (J has kinks
// there), otherwise just the integration range.
std::vector<double> integration_nodes(const SpectralDensity& sd) {
  if (sd.kind == SpectralDensity::Kind::ohmic) return {0.0, sd.max_frequency()};
  std::vector<double> nodes{0.0};
  for (const auto& [w, j] : sd.table) {
    if (w > nodes.back()) nodes.push_back(w);
  }
  return nodes;
}

}  // namespace

SpectralDensity SpectralDensity::ohmic(double cutoff) {
  require(cutoff > 0.0, "Ohmic cutoff must be positive");
  SpectralDensity sd;
  sd.kind = Kind::ohmic;
  sd.cutoff = cutoff;
  return sd;
}

SpectralDensity SpectralDensity::tabulated(std::vector<std::pair<double, double>> rows) {
  require(rows.size() >= 2, "spectral density table needs at least two rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].first >= 0.0, "spectral density table has negative frequency");
    require(rows[i].second >= 0.0, "spectral density table has negative J at row " + std::to_string(i));
    if (i > 0) require(rows[i].first > rows[i - 1].first, "spectral density frequencies must be strictly increasing");
  }
  SpectralDensity sd;
  sd.kind = Kind::tabulated;
  sd.table = std::move(rows);
  return sd;
}

double SpectralDensity::operator()(double omega) const {
  if (omega <= 0.0) return 0.0;
  if (kind == Kind::ohmic) return omega * std::exp(-omega / cutoff);
  if (omega < table.front().first || omega > table.back().first) return 0.0;
  const auto hi = std::upper_bound(table.begin(), table.end(), omega,
                                   [](double w, const std::pair<double, double>& row) { return w < row.first; });
  if (hi == table.end()) return table.back().second;
  const auto lo = hi - 1;
  const double w = (omega - lo->first) / (hi->first - lo->first);
  return (1.0 - w) * lo->second + w * hi->second;
}

double SpectralDensity::max_frequency() const { return kind == Kind::ohmic ? 50.0 * cutoff : table.back().first; }

ModelFactors compute_theta_phi(const SpectralDensity& sd, const BathParams& bath, const std::vector<double>& times,
                               const QuadratureOptions& options) {
  require(bath.temperature >= 0.0, "temperature must be nonnegative");
  require(!times.empty() && times.front() == 0.0, "time grid must start at 0");
  const double upper = sd.max_frequency();
  const std::vector<double> nodes = integration_nodes(sd);
  const double c = 4.0 * bath.coupling_prefactor;
  const std::int64_t count = static_cast<std::int64_t>(times.size());

  ModelFactors m;
  m.times = times;
  m.theta.assign(times.size(), 0.0);
  m.phi_fn.assign(times.size(), 0.0);
  std::vector<double> error(times.size(), 0.0);

  // Touch the rule once so its static tables are built before the threads start.
  Quadrature::integrate([](double x) { return x; }, 0.0, 1.0);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    const double t = times[static_cast<std::size_t>(i)];
    if (t == 0.0) continue;
    const auto theta_f = [&](double w) { return sd(w) / (w * w) * x_minus_sin(w * t); };
    const auto phi_f = [&](double w) {
      return sd(w) / (w * w) * thermal_weight(w, bath.temperature) * one_minus_cos(w * t);
    };
    const Integral th = integrate_pieces(theta_f, nodes, t, options);
    const Integral ph = integrate_pieces(phi_f, nodes, t, options);
    m.theta[static_cast<std::size_t>(i)] = c * th.value;
    m.phi_fn[static_cast<std::size_t>(i)] = c * ph.value;
    error[static_cast<std::size_t>(i)] = std::abs(c) * std::max(th.error / std::max(1.0, std::abs(th.value)),
                                                                ph.error / std::max(1.0, std::abs(ph.value)));
  }

  const auto worst = std::max_element(error.begin(), error.end());
  if (*worst > options.tolerance || !std::isfinite(*worst)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "quadrature did not converge: error estimate %.3g at t = %.6g", *worst,
                  times[static_cast<std::size_t>(worst - error.begin())]);
    throw NumericalError(buf);
  }

  if (sd.kind == SpectralDensity::Kind::ohmic) {
    const double wc = sd.cutoff;
    const double decay = wc * std::exp(-upper / wc);
    const double tail = std::abs(c) * decay *
                        std::max(times.back() + 1.0 / upper, 2.0 * thermal_weight(upper, bath.temperature) / upper);
    if (tail > options.tail_tolerance) {
      throw NumericalError("spectral tail beyond the integration limit is " + std::to_string(tail));
    }
  }
  return m;
}

DephasingFactors qubit_pair_factors(const ModelFactors& m) {
  std::vector<Complex> plus(m.times.size()), minus(m.times.size()), one(m.times.size(), 1.0),
      nine(m.times.size());
  for (std::size_t i = 0; i < m.times.size(); ++i) {
    plus[i] = std::exp(Complex(-m.phi_fn[i], m.theta[i]));
    minus[i] = std::conj(plus[i]);
    nine[i] = std::exp(-4.0 * m.phi_fn[i]);
  }
  std::map<int, std::vector<Complex>> f{{1, plus}, {4, plus}, {6, one}, {9, nine}, {11, minus}, {13, minus}};
  return DephasingFactors(4, m.times, std::move(f));
}

DephasingFactors qubit_pair_factors(const SpectralDensity& sd, const BathParams& bath,
                                    const std::vector<double>& times) {
  return qubit_pair_factors(compute_theta_phi(sd, bath, times));
}

DephasingFactors single_qubit_factor(const ModelFactors& m) {
  std::vector<Complex> f(m.times.size());
  for (std::size_t i = 0; i < m.times.size(); ++i) f[i] = std::exp(Complex(-m.phi_fn[i], -m.theta[i]));
  return DephasingFactors(2, m.times, {{1, std::move(f)}});
}

DephasingFactors relative_phase_factor(double phi_rel, const RelativePhaseConfig& cfg,
                                       const std::vector<double>& times) {
  const auto [p_up, p_down] = cfg.partner_populations;
  require(p_up >= 0.0 && p_down >= 0.0 && std::abs(p_up + p_down - 1.0) < 1e-12,
          "partner populations must be a probability pair");
  ModeConfig modes = modes_from_bath(discretize_bath(cfg.sd, cfg.n_modes), cfg.sd, cfg.coupling_scale, phi_rel);
  modes.temperature = cfg.bath.temperature;
  const DephasingFactors pair = reduced_coherences(modes, times);
  const auto& up = pair.at(4);
  const auto& down = pair.at(11);
  std::vector<Complex> f(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) f[i] = p_up * up[i] + p_down * down[i];
  return DephasingFactors(2, times, {{1, std::move(f)}});
}

}  // namespace cher
