#include "cher/st0.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace cher {

namespace {

using Vec3 = Eigen::Vector3d;

Vec3 to_vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<double, 3> to_array(const Vec3& v) { return {v(0), v(1), v(2)}; }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> unwrap(const std::vector<Complex>& z) {
  std::vector<double> out(z.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double a = std::arg(z[i]);
    if (i > 0) {
      while (a + offset - out[i - 1] > kPi) offset -= 2.0 * kPi;
      while (a + offset - out[i - 1] < -kPi) offset += 2.0 * kPi;
    }
    out[i] = a + offset;
  }
  return out;
}

std::vector<Complex> rotated_factor(const std::vector<Vec3>& points, double tilt) {
  const double c = std::cos(tilt), s = std::sin(tilt);
  std::vector<Complex> phi(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& r = points[i];
    const double xr = r(0) * c - r(2) * s;
    phi[i] = Complex(-r(1), -xr);
  }
  return phi;
}

}  // namespace

void ST0Params::validate() const {
  require(std::isfinite(j), "J must be finite");
  require(t2star > 0.0, "T2* must be positive");
  require(hbar > 0.0, "hbar must be positive");
  require(std::isfinite(delta_b) && std::isfinite(g_factor) && std::isfinite(mu_b), "field parameters must be finite");
  require(omega() > 0.0, "J and the field gradient are both zero: the qubit does not rotate");
  const Vec3 r = to_vec(initial);
  require(r.norm() <= 1.0 + 1e-12, "initial Bloch vector lies outside the unit ball");
}

double ST0Params::omega() const {
  const double b = 2.0 * g_factor * mu_b * delta_b;
  return std::sqrt(j * j + b * b) / hbar;
}

double ST0Params::tilt() const { return std::atan2(-2.0 * g_factor * mu_b * delta_b, j); }

std::vector<double> default_tau_grid() { return uniform_time_grid(120.0, 1201); }

ReturnProbabilities simulate_return_probs(const ST0Params& params, const std::vector<double>& tau) {
  params.validate();
  require(is_time_grid(tau), "delay grid must start at 0 and be strictly increasing");
  const double b = params.g_factor * params.mu_b * params.delta_b;
  CMatrix h(2, 2);
  h << -params.j, b, b, 0.0;  // basis (S, T0)
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const CMatrix v = es.eigenvectors();
  const double gap = (es.eigenvalues()(1) - es.eigenvalues()(0)) / params.hbar;

  // The measurement frame has y reversed relative to the standard Pauli frame.
  const Complex i(0.0, 1.0);
  const auto& r0 = params.initial;
  CMatrix rho0(2, 2);
  rho0 << 0.5 * (1.0 + r0[2]), 0.5 * (r0[0] + i * r0[1]), 0.5 * (r0[0] - i * r0[1]), 0.5 * (1.0 - r0[2]);
  const CMatrix rho_e = v.adjoint() * rho0 * v;

  CVector sx(2), sy(2), sz(2);
  sx << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  sy << 1.0 / std::sqrt(2.0), -i / std::sqrt(2.0);
  sz << 1.0, 0.0;

  ReturnProbabilities p;
  p.tau = tau;
  for (double t : tau) {
    CMatrix r = rho_e;
    const Complex coherence = std::polar(std::exp(-(t / params.t2star) * (t / params.t2star)), gap * t);
    r(0, 1) = rho_e(0, 1) * coherence;
    r(1, 0) = std::conj(r(0, 1));
    const CMatrix rho = v * r * v.adjoint();
    p.px.push_back(std::clamp(std::real(sx.dot(rho * sx)), 0.0, 1.0));
    p.py.push_back(std::clamp(std::real(sy.dot(rho * sy)), 0.0, 1.0));
    p.pz.push_back(std::clamp(std::real(sz.dot(rho * sz)), 0.0, 1.0));
  }
  return p;
}

Trajectory to_trajectory(const ReturnProbabilities& p) {
  require(p.px.size() == p.tau.size() && p.py.size() == p.tau.size() && p.pz.size() == p.tau.size(),
          "probability series lengths differ");
  Trajectory t;
  t.tau = p.tau;
  for (std::size_t i = 0; i < p.tau.size(); ++i) {
    t.r.push_back({2.0 * p.px[i] - 1.0, 2.0 * p.py[i] - 1.0, 2.0 * p.pz[i] - 1.0});
  }
  return t;
}

AxisFit identify_axis(const Trajectory& traj) {
  require(traj.r.size() == traj.tau.size() && traj.r.size() >= 3, "trajectory needs at least three points");
  const auto n = static_cast<Eigen::Index>(traj.r.size());
  Eigen::MatrixXd pts(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) pts.row(i) = to_vec(traj.r[static_cast<std::size_t>(i)]).transpose();
  const Vec3 centroid = pts.colwise().mean().transpose();
  const Eigen::MatrixXd centered = pts.rowwise() - centroid.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  if (sv(1) <= 1e-9 * std::max(sv(0), 1e-300)) throw ValidationError("trajectory is degenerate (collinear points)");
  Vec3 normal = svd.matrixV().col(2);
  if (normal(2) < 0.0) normal = -normal;

  AxisFit fit;
  fit.normal = to_array(normal);
  fit.centroid = to_array(centroid);
  fit.tilt = std::atan2(normal(0), normal(2));

  std::vector<Vec3> points;
  for (const auto& r : traj.r) points.push_back(to_vec(r));
  const auto phi = rotated_factor(points, fit.tilt);
  const auto phase = unwrap(phi);
  double sw = 0.0, st = 0.0, sp = 0.0, stt = 0.0, stp = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double w = std::norm(phi[i]);
    const double t = traj.tau[i];
    sw += w;
    st += w * t;
    sp += w * phase[i];
    stt += w * t * t;
    stp += w * t * phase[i];
  }
  const double slope = (sw * stp - st * sp) / (sw * stt - st * st);
  if (!std::isfinite(slope) || std::abs(slope) * (traj.tau.back() - traj.tau.front()) < 2.0 * kPi) {
    throw ValidationError("trajectory spans less than one rotation period");
  }
  fit.omega = -slope;
  return fit;
}

std::vector<Complex> recover_factor(const Trajectory& traj, const AxisFit& axis, bool project_to_disk) {
  std::vector<Vec3> points;
  const Vec3 normal = to_vec(axis.normal).normalized();
  const Vec3 centroid = to_vec(axis.centroid);
  const double offset = centroid.dot(normal);
  const Vec3 center = offset * normal;
  const double radius = std::sqrt(std::max(0.0, 1.0 - offset * offset));
  for (const auto& r : traj.r) {
    Vec3 p = to_vec(r);
    if (project_to_disk) {
      p -= (p - centroid).dot(normal) * normal;
      Vec3 in_plane = p - center;
      const double len = in_plane.norm();
      if (len > radius) in_plane *= radius / len;
      p = center + in_plane;
    }
    points.push_back(p);
  }
  return rotated_factor(points, axis.tilt);
}

QuasiDistribution recover_distribution(const Trajectory& traj, const AxisFit& axis, bool project_to_disk,
                                       const Inversion1DOptions& options, InversionReport* report) {
  std::vector<Complex> phi = recover_factor(traj, axis, project_to_disk);
  // The state at zero delay is the prepared one.
  phi[0] = 1.0;
  return invert_1d(traj.tau, phi, "omega", options, report);
}

Inversion1DOptions noisy_inversion_defaults() {
  Inversion1DOptions o;
  o.window = true;
  o.forward_check = false;
  return o;
}

void NoiseConfig::validate() const {
  require(sigma >= 0.0, "noise sigma must be nonnegative");
  require(repeats >= 1, "repeats must be at least 1");
  require(smoothing_window >= 3 && smoothing_window % 2 == 1, "smoothing window must be odd and at least 3");
}

std::vector<double> smooth_local_quadratic(const std::vector<double>& y, int window) {
  const auto n = static_cast<int>(y.size());
  require(window >= 3 && window % 2 == 1, "smoothing window must be odd and at least 3");
  if (n < window) return y;
  std::vector<double> out(y.size());
  const int half = window / 2;
  for (int i = 0; i < n; ++i) {
    const int lo = std::clamp(i - half, 0, n - window);
    Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
    Eigen::Vector3d aty = Eigen::Vector3d::Zero();
    for (int k = lo; k < lo + window; ++k) {
      const double u = k - i;
      const Eigen::Vector3d row(1.0, u, u * u);
      ata += row * row.transpose();
      aty += row * y[static_cast<std::size_t>(k)];
    }
    out[static_cast<std::size_t>(i)] = ata.ldlt().solve(aty)(0);
  }
  return out;
}

NoiseStudy noise_study(const ST0Params& params, const std::vector<double>& tau, const NoiseConfig& noise) {
  noise.validate();
  const ReturnProbabilities clean = simulate_return_probs(params, tau);
  std::vector<double> values(static_cast<std::size_t>(noise.repeats), 0.0);
  std::vector<char> ok(static_cast<std::size_t>(noise.repeats), 0);

#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < noise.repeats; ++rep) {
    std::mt19937_64 rng(splitmix64(noise.seed ^ splitmix64(static_cast<std::uint64_t>(rep))));
    std::normal_distribution<double> gauss(0.0, 1.0);
    ReturnProbabilities p = clean;
    for (auto* series : {&p.px, &p.py, &p.pz}) {
      for (double& v : *series) v = std::clamp(v + noise.sigma * gauss(rng), 0.0, 1.0);
      *series = smooth_local_quadratic(*series, noise.smoothing_window);
    }
    try {
      const Trajectory traj = to_trajectory(p);
      const AxisFit fit = identify_axis(traj);
      const QuasiDistribution q = recover_distribution(traj, fit, true, noise.inversion);
      values[static_cast<std::size_t>(rep)] = nonclassicality_negativity(q).value;
      ok[static_cast<std::size_t>(rep)] = 1;
    } catch (const std::exception&) {
      ok[static_cast<std::size_t>(rep)] = 0;
    }
  }

  NoiseStudy study;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (ok[i]) {
      study.values.push_back(values[i]);
    } else {
      ++study.failures;
    }
  }
  if (study.values.empty()) throw NumericalError("every noise-study repeat failed");
  double sum = 0.0;
  for (double v : study.values) sum += v;
  study.mean = sum / static_cast<double>(study.values.size());
  double var = 0.0;
  for (double v : study.values) var += (v - study.mean) * (v - study.mean);
  study.std = study.values.size() > 1 ? std::sqrt(var / static_cast<double>(study.values.size() - 1)) : 0.0;
  return study;
}

NonclassicalityResult noiseless_nonclassicality(const ST0Params& params, const std::vector<double>& tau,
                                                const Inversion1DOptions& options) {
  const Trajectory traj = to_trajectory(simulate_return_probs(params, tau));
  const AxisFit fit = identify_axis(traj);
  InversionReport rep;
  const QuasiDistribution q = recover_distribution(traj, fit, false, options, &rep);
  NonclassicalityResult r = nonclassicality_negativity(q);
  r.inversion = rep;
  return r;
}

}  // namespace cher
