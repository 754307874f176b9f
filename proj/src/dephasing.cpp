#include "cher/dephasing.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace cher {

namespace {

void require_same_grid(const std::vector<double>& a, const std::vector<double>& b, const char* what) {
  require(a == b, std::string(what) + ": time grids differ (resample explicitly with resample_linear)");
}

Eigen::Map<const CVector> vec(const CMatrix& m) { return {m.data(), m.size()}; }

// Tr(L_j L_l L_k L_m) indexed [((j N + l) N + k) N + m], N = n^2.
std::vector<Complex> four_trace_tensor(const GeneratorSet& gens) {
  const int size = gens.size();
  std::vector<CMatrix> products(static_cast<std::size_t>(size * size));
  for (int j = 0; j < size; ++j) {
    for (int l = 0; l < size; ++l) products[static_cast<std::size_t>(j * size + l)] = gens[j] * gens[l];
  }
  std::vector<Complex> t(static_cast<std::size_t>(size) * size * size * size);
  for (int jl = 0; jl < size * size; ++jl) {
    const CMatrix& left = products[static_cast<std::size_t>(jl)];
    for (int km = 0; km < size * size; ++km) {
      const CMatrix& right = products[static_cast<std::size_t>(km)];
      t[static_cast<std::size_t>(jl) * size * size + km] = left.cwiseProduct(right.transpose()).sum();
    }
  }
  return t;
}

}  // namespace

std::vector<int> positive_root_indices(int n) {
  std::vector<int> out;
  for (int k = 2; k <= n; ++k) {
    for (int j = 1; j < k; ++j) out.push_back(ladder_index(j, k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

DephasingFactors::DephasingFactors(int n_, std::vector<double> times_, std::map<int, std::vector<Complex>> factors_,
                                   double tolerance)
    : n(n_), times(std::move(times_)), factors(std::move(factors_)) {
  require(n >= 2, "dephasing factors need n >= 2");
  require(is_time_grid(times), "time grid must start at 0 and be strictly increasing");
  const auto positive = positive_root_indices(n);
  for (auto& [index, series] : factors) {
    require(std::find(positive.begin(), positive.end(), index) != positive.end(),
            "factor index " + std::to_string(index) + " is not a positive root of su(" + std::to_string(n) + ")");
    require(series.size() == times.size(), "factor " + std::to_string(index) + " has wrong length");
    if (std::abs(series[0] - 1.0) > tolerance) {
      throw ValidationError("factor " + std::to_string(index) + " is not 1 at t = 0");
    }
    series[0] = 1.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
      if (!(std::abs(series[i]) <= 1.0 + tolerance)) {
        throw ValidationError("factor " + std::to_string(index) + " exceeds unit modulus at t = " +
                              std::to_string(times[i]));
      }
    }
  }
}

const std::vector<Complex>& DephasingFactors::at(int index) const {
  const auto it = factors.find(index);
  if (it == factors.end()) throw ValidationError("missing dephasing factor for root index " + std::to_string(index));
  return it->second;
}

Complex DephasingFactors::value(int index, std::size_t time_index) const {
  if (index == 0) return 1.0;
  const int root = static_cast<int>(std::floor(std::sqrt(static_cast<double>(index + 1)) + 1e-9));
  if (diagonal_index(root) == index) return 1.0;
  // Raising operators sit at even offsets from the start of their block.
  if ((index - root * root) % 2 == 0) return at(index)[time_index];
  return std::conj(at(index - 1)[time_index]);
}

DephasingFactors multiply(const DephasingFactors& a, const DephasingFactors& b) {
  require(a.n == b.n, "multiply: dimension mismatch");
  require_same_grid(a.times, b.times, "multiply");
  std::map<int, std::vector<Complex>> out;
  for (const auto& [index, series] : a.factors) {
    const auto& other = b.at(index);
    std::vector<Complex> prod(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) prod[i] = series[i] * other[i];
    out.emplace(index, std::move(prod));
  }
  DephasingFactors f(a.n, a.times, std::move(out));
  f.time_unit = a.time_unit;
  return f;
}

DephasingFactors resample_linear(const DephasingFactors& f, const std::vector<double>& times) {
  require(is_time_grid(times), "resample target must start at 0 and be strictly increasing");
  require(times.back() <= f.times.back() * (1.0 + 1e-12), "resample target extends beyond the source grid");
  std::map<int, std::vector<Complex>> out;
  for (const auto& [index, series] : f.factors) {
    std::vector<Complex> r(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto hi = std::upper_bound(f.times.begin(), f.times.end(), times[i]);
      if (hi == f.times.end()) {
        r[i] = series.back();
        continue;
      }
      const std::size_t j = static_cast<std::size_t>(hi - f.times.begin());
      const double w = (times[i] - f.times[j - 1]) / (f.times[j] - f.times[j - 1]);
      r[i] = (1.0 - w) * series[j - 1] + w * series[j];
    }
    out.emplace(index, std::move(r));
  }
  DephasingFactors g(f.n, times, std::move(out));
  g.time_unit = f.time_unit;
  return g;
}

DynamicalMapSeries map_from_factors(const DephasingFactors& f) {
  const Diagonalizer x = simultaneous_diagonalizer(f.n);
  const int size = f.n * f.n;
  for (int index : positive_root_indices(f.n)) f.at(index);
  DynamicalMapSeries m;
  m.n = f.n;
  m.times = f.times;
  m.maps.reserve(f.times.size());
  for (std::size_t t = 0; t < f.times.size(); ++t) {
    CVector d(size);
    for (int k = 0; k < size; ++k) d(k) = f.value(k, t);
    m.maps.push_back(x.inverse * d.asDiagonal() * x.forward);
  }
  return m;
}

DynamicalMapSeries compose(const DynamicalMapSeries& a, const DynamicalMapSeries& b) {
  require(a.n == b.n, "compose: dimension mismatch");
  require_same_grid(a.times, b.times, "compose");
  DynamicalMapSeries out;
  out.n = a.n;
  out.times = a.times;
  for (std::size_t t = 0; t < a.maps.size(); ++t) out.maps.push_back(a.maps[t] * b.maps[t]);
  return out;
}

std::vector<CMatrix> apply_map(const DynamicalMapSeries& map, const CMatrix& rho0, double tolerance) {
  require(rho0.rows() == map.n && rho0.cols() == map.n, "initial state has wrong dimension");
  require((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() <= tolerance, "initial state is not Hermitian");
  require(std::abs(rho0.trace() - 1.0) <= tolerance, "initial state does not have unit trace");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho0, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -tolerance, "initial state is not positive semidefinite");
  const GeneratorSet gens(map.n);
  const CVector coords = gens.coordinates(rho0);
  std::vector<CMatrix> out;
  out.reserve(map.maps.size());
  for (const auto& e : map.maps) out.push_back(gens.compose(e * coords));
  return out;
}

double choi_min_eigenvalue(const CMatrix& generator_map, const GeneratorSet& gens) {
  const int n = gens.n();
  CMatrix choi = CMatrix::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      CMatrix eab = CMatrix::Zero(n, n);
      eab(a, b) = 1.0;
      choi.block(a * n, b * n, n, n) = gens.compose(generator_map * gens.coordinates(eab));
    }
  }
  const CMatrix herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Complex chi_identity_element(const CMatrix& chi, int n) {
  Complex diag = 0.0;
  for (int l = 1; l < chi.rows(); ++l) diag += chi(l, l);
  return chi(0, 0) + 2.0 / n * diag;
}

DynamicalMapSeries reconstruct_from_chi(const ChiSeries& c, const GeneratorSet& gens) {
  require(c.n == gens.n(), "chi dimension does not match generator set");
  require(c.chi.size() == c.times.size(), "chi series length does not match time grid");
  const int size = gens.size();
  const int n = gens.n();
  const auto tr4 = four_trace_tensor(gens);
  const auto at = [&](int j, int l, int k, int m) {
    return tr4[((static_cast<std::size_t>(j) * size + l) * size + k) * size + m];
  };
  DynamicalMapSeries out;
  out.n = n;
  out.times = c.times;
  for (const auto& chi : c.chi) {
    require(chi.rows() == size && chi.cols() == size, "chi matrix has wrong dimension");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (chi + chi.adjoint()), Eigen::EigenvaluesOnly);
    out.cp_violation = std::max(out.cp_violation, -es.eigenvalues().minCoeff());

    CMatrix e = CMatrix::Zero(size, size);
    // [E]_jk = Tr(L_j E(L_k)) / Tr(L_j L_j) with E(X) = sum chi_lm L_l X L_m.
    // With L_0 = I this single expression yields the jk, 0k, j0 and 00 forms.
    for (int j = 0; j < size; ++j) {
      const double norm = gens.norm(j);
      for (int k = 0; k < size; ++k) {
        Complex acc = 0.0;
        for (int l = 0; l < size; ++l) {
          for (int m = 0; m < size; ++m) acc += chi(l, m) * at(j, l, k, m);
        }
        e(j, k) = acc / norm;
      }
    }
    out.maps.push_back(std::move(e));
  }
  return out;
}

ChiSeries chi_from_map(const DynamicalMapSeries& map, const GeneratorSet& gens) {
  require(map.n == gens.n(), "map dimension does not match generator set");
  const int size = gens.size();
  ChiSeries c;
  c.n = map.n;
  c.times = map.times;
  for (const auto& e : map.maps) {
    require(e.rows() == size && e.cols() == size, "map matrix has wrong dimension");
    // Superoperator acting on column-major vec(X).
    CMatrix s = CMatrix::Zero(size, size);
    for (int j = 0; j < size; ++j) {
      for (int k = 0; k < size; ++k) {
        if (e(j, k) == Complex(0.0)) continue;
        s += e(j, k) / gens.norm(k) * vec(gens[j]) * vec(gens[k]).adjoint();
      }
    }
    CMatrix chi(size, size);
    for (int l = 0; l < size; ++l) {
      for (int m = 0; m < size; ++m) {
        const CMatrix g = Eigen::kroneckerProduct(gens[m].transpose(), gens[l]);
        chi(l, m) = g.conjugate().cwiseProduct(s).sum() / (gens.norm(l) * gens.norm(m));
      }
    }
    c.chi.push_back(std::move(chi));
  }
  return c;
}

DephasingFactors factors_from_map(const DynamicalMapSeries& map, double threshold, PureDephasingCheck* check) {
  const Diagonalizer x = simultaneous_diagonalizer(map.n);
  const LadderBasis ladder = build_ladder_basis(map.n);
  const auto positive = positive_root_indices(map.n);
  std::map<int, std::vector<Complex>> factors;
  for (int index : positive) factors[index].resize(map.times.size());
  PureDephasingCheck report;
  for (std::size_t t = 0; t < map.maps.size(); ++t) {
    const CMatrix d = x.forward * map.maps[t] * x.inverse;
    const CMatrix off = d - CMatrix(d.diagonal().asDiagonal());
    const double rel = off.norm() / std::max(d.norm(), 1e-300);
    double csa_dev = std::abs(d(0, 0) - 1.0);
    for (int idx : ladder.csa_indices) csa_dev = std::max(csa_dev, std::abs(d(idx, idx) - 1.0));
    const double worst = std::max(rel, csa_dev);
    if (worst > report.max_offdiagonal) {
      report.max_offdiagonal = worst;
      report.worst_time = t;
    }
    for (int index : positive) factors[index][t] = d(index, index);
  }
  if (check) *check = report;
  if (report.max_offdiagonal > threshold) {
    throw NumericalError("not pure dephasing: ladder-basis residual " + std::to_string(report.max_offdiagonal) +
                         " at time index " + std::to_string(report.worst_time));
  }
  return DephasingFactors(map.n, map.times, std::move(factors));
}

}  // namespace cher
