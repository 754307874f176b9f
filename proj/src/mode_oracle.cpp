#include "cher/mode_oracle.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace cher {

namespace {

struct QubitState {
  int s1;
  int s2;
};

std::vector<QubitState> basis_states(int qubits) {
  if (qubits == 1) return {{1, 0}, {-1, 0}};
  return {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
}

Complex displacement(const Mode& m, const QubitState& s) {
  return m.g1 * static_cast<double>(s.s1) + m.g2 * static_cast<double>(s.s2);
}

// Golub-Welsch: Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  RMatrix jacobi = RMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(jacobi);
  nodes.resize(static_cast<std::size_t>(n));
  weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = 2.0 * v * v;
  }
}

double coth_weight(double omega, double temperature) {
  return temperature > 0.0 ? 1.0 / std::tanh(omega / (2.0 * temperature)) : 1.0;
}

// Per-mode Fock-space propagator data for one displacement value.
struct FockPropagator {
  CMatrix vectors;
  RVector energies;

  CMatrix at(double t) const {
    CVector phases(energies.size());
    for (Eigen::Index i = 0; i < energies.size(); ++i) phases(i) = std::polar(1.0, -energies(i) * t);
    return vectors * phases.asDiagonal() * vectors.adjoint();
  }
};

FockPropagator fock_propagator(double omega, Complex z, int cutoff) {
  CMatrix h = CMatrix::Zero(cutoff, cutoff);
  for (int n = 0; n < cutoff; ++n) h(n, n) = omega * n;
  for (int n = 1; n < cutoff; ++n) {
    const double s = std::sqrt(static_cast<double>(n));
    h(n, n - 1) = z * s;             // Z b^dagger
    h(n - 1, n) = std::conj(z) * s;  // Z* b
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return {es.eigenvectors(), es.eigenvalues()};
}

RVector thermal_populations(double omega, double temperature, int cutoff) {
  RVector p = RVector::Zero(cutoff);
  if (temperature <= 0.0) {
    p(0) = 1.0;
    return p;
  }
  for (int n = 0; n < cutoff; ++n) p(n) = std::exp(-omega * n / temperature);
  return p / p.sum();
}

}  // namespace

void ModeConfig::validate() const {
  require(!modes.empty(), "mode configuration has no modes");
  require(qubits == 1 || qubits == 2, "qubits must be 1 or 2");
  require(temperature >= 0.0, "temperature must be nonnegative");
  for (std::size_t k = 0; k < modes.size(); ++k) {
    require(modes[k].omega > 0.0, "mode " + std::to_string(k) + " has non-positive frequency");
  }
  if (method == Method::truncated_fock) {
    require(fock_cutoff >= 2, "fock_cutoff must be at least 2 for the truncated-fock method");
    const double log_dim = qubits * std::log(2.0) + static_cast<double>(modes.size()) * std::log(fock_cutoff);
    require(log_dim <= std::log(max_hilbert_dim), "total Hilbert dimension exceeds the configured cap");
  }
}

std::string to_string(ModeConfig::Method m) {
  return m == ModeConfig::Method::analytic_displacement ? "analytic-displacement" : "truncated-fock";
}

ModeConfig::Method parse_method(const std::string& name) {
  if (name == "analytic-displacement") return ModeConfig::Method::analytic_displacement;
  if (name == "truncated-fock") return ModeConfig::Method::truncated_fock;
  throw ValidationError("unknown oracle method '" + name + "' (expected analytic-displacement or truncated-fock)");
}

DiscretizedBath discretize_bath(const SpectralDensity& sd, int n_modes) {
  require(n_modes >= 1, "n_modes must be at least 1");
  const double lo = sd.kind == SpectralDensity::Kind::ohmic ? 0.0 : sd.table.front().first;
  const double hi = sd.kind == SpectralDensity::Kind::ohmic ? 30.0 * sd.cutoff : sd.table.back().first;
  std::vector<double> x, w;
  gauss_legendre(n_modes, x, w);
  DiscretizedBath bath;
  for (int k = 0; k < n_modes; ++k) {
    bath.omega.push_back(lo + 0.5 * (hi - lo) * (x[static_cast<std::size_t>(k)] + 1.0));
    bath.weight.push_back(0.5 * (hi - lo) * w[static_cast<std::size_t>(k)]);
  }
  return bath;
}

ModeConfig modes_from_bath(const DiscretizedBath& bath, const SpectralDensity& sd, double scale, double phi_rel) {
  ModeConfig cfg;
  for (std::size_t k = 0; k < bath.omega.size(); ++k) {
    const double g = scale * std::sqrt(sd(bath.omega[k]) * bath.weight[k]);
    cfg.modes.push_back({bath.omega[k], Complex(g, 0.0), std::polar(g, phi_rel)});
  }
  return cfg;
}

std::vector<double> discrete_phi(const DiscretizedBath& bath, const SpectralDensity& sd, double temperature,
                                 const std::vector<double>& times) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < bath.omega.size(); ++k) {
      const double w = bath.omega[k];
      acc += sd(w) * bath.weight[k] * coth_weight(w, temperature) * one_minus_cos(w * times[i]) / (w * w);
    }
    out[i] = 4.0 * acc;
  }
  return out;
}

Complex mode_coherence_analytic(double omega, Complex za, Complex zb, double temperature, double t) {
  const Complex alpha = (1.0 - std::polar(1.0, omega * t)) / omega;
  const Complex ba = za * alpha;
  const Complex bb = zb * alpha;
  const double x = omega * t;
  const double shape = x_minus_sin(x) / (omega * omega);
  const double phase = (std::norm(za) - std::norm(zb)) * shape + std::imag(std::conj(bb) * ba);
  const double decay = 0.5 * std::norm(ba - bb) * coth_weight(omega, temperature);
  return std::polar(std::exp(-decay), phase);
}

DephasingFactors reduced_coherences(const ModeConfig& cfg, const std::vector<double>& times, OracleReport* report) {
  cfg.validate();
  require(is_time_grid(times), "time grid must start at 0 and be strictly increasing");
  const auto states = basis_states(cfg.qubits);
  const int n = static_cast<int>(states.size());
  const std::size_t nt = times.size();

  // coh[a * n + b][t] accumulates prod_k Tr[U_a rho_k U_b^dagger].
  std::vector<std::vector<Complex>> coh(static_cast<std::size_t>(n * n), std::vector<Complex>(nt, 1.0));
  double leakage = 0.0;

  if (cfg.method == ModeConfig::Method::analytic_displacement) {
#pragma omp parallel for schedule(static)
    for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(nt); ++ti) {
      const double t = times[static_cast<std::size_t>(ti)];
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          Complex c = 1.0;
          for (const auto& m : cfg.modes) {
            c *= mode_coherence_analytic(m.omega, displacement(m, states[a]), displacement(m, states[b]),
                                         cfg.temperature, t);
          }
          coh[static_cast<std::size_t>(a * n + b)][static_cast<std::size_t>(ti)] = c;
        }
      }
    }
  } else {
    const int cutoff = cfg.fock_cutoff;
    for (const auto& m : cfg.modes) {
      std::vector<FockPropagator> props;
      for (const auto& s : states) props.push_back(fock_propagator(m.omega, displacement(m, s), cutoff));
      const RVector pops = thermal_populations(m.omega, cfg.temperature, cutoff);
      leakage = std::max(leakage, pops(cutoff - 1));
      const CMatrix rho = pops.cast<Complex>().asDiagonal();
      double mode_leak = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mode_leak)
      for (std::int64_t ti = 0; ti < static_cast<std::int64_t>(nt); ++ti) {
        const double t = times[static_cast<std::size_t>(ti)];
        std::vector<CMatrix> u;
        for (const auto& p : props) {
          u.push_back(p.at(t));
          const CMatrix evolved = u.back() * rho * u.back().adjoint();
          mode_leak = std::max(mode_leak, evolved(cutoff - 1, cutoff - 1).real());
        }
        for (int a = 0; a < n; ++a) {
          for (int b = a + 1; b < n; ++b) {
            const Complex c = (u[static_cast<std::size_t>(a)] * rho * u[static_cast<std::size_t>(b)].adjoint()).trace();
            coh[static_cast<std::size_t>(a * n + b)][static_cast<std::size_t>(ti)] *= c;
          }
        }
      }
      leakage = std::max(leakage, mode_leak);
    }
    if (leakage > cfg.leakage_tolerance) {
      throw NumericalError("Fock truncation leakage " + std::to_string(leakage) + " exceeds tolerance; try fock_cutoff >= " +
                           std::to_string(2 * cutoff));
    }
  }
  if (report) report->max_leakage = leakage;

  std::map<int, std::vector<Complex>> factors;
  for (int k = 2; k <= n; ++k) {
    for (int j = 1; j < k; ++j) factors[ladder_index(j, k)] = coh[static_cast<std::size_t>((j - 1) * n + (k - 1))];
  }
  return DephasingFactors(n, times, std::move(factors));
}

}  // namespace cher
