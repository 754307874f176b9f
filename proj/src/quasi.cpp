#include "cher/quasi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cher {

std::string to_string(CoordinateSpace s) { return s == CoordinateSpace::lambda ? "lambda" : "simple-root"; }

CoordinateSpace parse_space(const std::string& name) {
  if (name == "lambda") return CoordinateSpace::lambda;
  if (name == "simple-root") return CoordinateSpace::simple_root;
  throw ValidationError("unknown coordinate space '" + name + "'");
}

QuasiDistribution QuasiDistribution::on_grid(CoordinateSpace space, std::vector<std::string> labels,
                                             const std::vector<double>& mins, const std::vector<double>& steps,
                                             std::vector<int> counts, std::vector<double> values) {
  const std::size_t d = counts.size();
  require(labels.size() == d && mins.size() == d && steps.size() == d, "grid axis descriptions disagree in length");
  QuasiDistribution q;
  q.space = space;
  q.labels = std::move(labels);
  q.origin = Eigen::Map<const RVector>(mins.data(), static_cast<Eigen::Index>(d));
  q.basis = RMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) q.basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = steps[i];
  q.counts = std::move(counts);
  q.values = std::move(values);
  q.validate();
  return q;
}

QuasiDistribution QuasiDistribution::point_masses(CoordinateSpace space, std::vector<DeltaFactor> deltas) {
  QuasiDistribution q;
  q.space = space;
  q.origin.resize(0);
  q.basis.resize(0, 0);
  q.values = {1.0};
  q.deltas = std::move(deltas);
  q.validate();
  return q;
}

std::size_t QuasiDistribution::cells() const {
  std::size_t c = 1;
  for (int n : counts) c *= static_cast<std::size_t>(n);
  return c;
}

double QuasiDistribution::cell_volume() const { return dims() == 0 ? 1.0 : std::abs(basis.determinant()); }

bool QuasiDistribution::axis_aligned(double tolerance) const {
  for (int r = 0; r < dims(); ++r) {
    for (int c = 0; c < dims(); ++c) {
      if (r != c && std::abs(basis(r, c)) > tolerance * std::abs(basis(c, c))) return false;
    }
  }
  return true;
}

RVector QuasiDistribution::point(std::size_t cell) const {
  RVector p = origin;
  for (int d = dims() - 1; d >= 0; --d) {
    const auto n = static_cast<std::size_t>(counts[static_cast<std::size_t>(d)]);
    p += basis.col(d) * static_cast<double>(cell % n);
    cell /= n;
  }
  return p;
}

std::vector<double> QuasiDistribution::axis(int d) const {
  require(axis_aligned(), "axis coordinates requested on a skewed lattice");
  std::vector<double> out(static_cast<std::size_t>(counts.at(static_cast<std::size_t>(d))));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = origin(d) + basis(d, d) * static_cast<double>(i);
  return out;
}

double QuasiDistribution::mass() const {
  double dense = std::accumulate(values.begin(), values.end(), 0.0) * cell_volume();
  for (const auto& d : deltas) dense *= d.mass;
  return dense;
}

double QuasiDistribution::negative_mass() const {
  double m = kernels::parallel::negative_mass(values, cell_volume());
  for (const auto& d : deltas) m *= d.mass;
  return m;
}

double QuasiDistribution::positive_mass() const { return mass() + negative_mass(); }

double QuasiDistribution::min_value() const { return *std::min_element(values.begin(), values.end()); }

kernels::LatticeView QuasiDistribution::lattice() const { return {origin, basis, counts}; }

void QuasiDistribution::validate() const {
  const auto d = static_cast<Eigen::Index>(counts.size());
  require(labels.size() == counts.size(), "axis labels do not match the number of axes");
  require(origin.size() == d && basis.rows() == d && basis.cols() == d, "lattice origin/basis have wrong shape");
  for (int c : counts) require(c >= 1, "axis count must be positive");
  require(values.size() == cells(), "value array does not match the grid size");
  if (d > 0) require(std::abs(basis.determinant()) > 0.0, "lattice basis is singular");
  for (double v : values) require(std::isfinite(v), "distribution contains non-finite values");
  for (const auto& delta : deltas) {
    require(delta.mass >= 0.0, "delta factor '" + delta.label + "' has negative mass");
    require(std::find(labels.begin(), labels.end(), delta.label) == labels.end(),
            "delta label '" + delta.label + "' duplicates a dense axis");
  }
}

bool same_support(const QuasiDistribution& a, const QuasiDistribution& b, double tolerance) {
  if (a.space != b.space || a.labels != b.labels || a.counts != b.counts) return false;
  if ((a.origin - b.origin).cwiseAbs().maxCoeff() > tolerance) return false;
  if (a.dims() > 0 && (a.basis - b.basis).cwiseAbs().maxCoeff() > tolerance) return false;
  if (a.deltas.size() != b.deltas.size()) return false;
  for (std::size_t i = 0; i < a.deltas.size(); ++i) {
    if (a.deltas[i].label != b.deltas[i].label) return false;
    if (std::abs(a.deltas[i].location - b.deltas[i].location) > tolerance) return false;
  }
  return true;
}

QuasiDistribution mix(const QuasiDistribution& p, const QuasiDistribution& q, double a) {
  require(same_support(p, q), "mix: distributions live on different supports");
  QuasiDistribution out = p;
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a * p.values[i] + (1.0 - a) * q.values[i];
  return out;
}

QuasiDistribution marginal(const QuasiDistribution& q, int axis) {
  require(q.axis_aligned(), "marginal requires an axis-aligned grid");
  require(axis >= 0 && axis < q.dims(), "marginal axis out of range");
  double other_volume = 1.0;
  for (int d = 0; d < q.dims(); ++d) {
    if (d != axis) other_volume *= std::abs(q.basis(d, d));
  }
  std::vector<double> values(static_cast<std::size_t>(q.counts[static_cast<std::size_t>(axis)]), 0.0);
  std::size_t inner = 1;
  for (int d = axis + 1; d < q.dims(); ++d) inner *= static_cast<std::size_t>(q.counts[static_cast<std::size_t>(d)]);
  const std::size_t n = values.size();
  for (std::size_t cell = 0; cell < q.values.size(); ++cell) values[(cell / inner) % n] += q.values[cell];
  for (double& v : values) v *= other_volume;
  QuasiDistribution m = QuasiDistribution::on_grid(q.space, {q.labels[static_cast<std::size_t>(axis)]},
                                                   {q.origin(axis)}, {q.basis(axis, axis)},
                                                   {static_cast<int>(n)}, std::move(values));
  m.deltas = q.deltas;
  return m;
}

QuasiDistribution convolve_1d(const QuasiDistribution& p, const QuasiDistribution& q) {
  require(p.dims() == 1 && q.dims() == 1, "convolve_1d needs one-dimensional inputs");
  const double step = p.basis(0, 0);
  require(std::abs(step - q.basis(0, 0)) <= 1e-12 * std::abs(step), "convolve_1d needs equal grid steps");
  const std::size_t np = p.values.size(), nq = q.values.size();
  std::vector<double> out(np + nq - 1, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(out.size()); ++k) {
    const std::size_t uk = static_cast<std::size_t>(k);
    const std::size_t lo = uk >= nq - 1 ? uk - (nq - 1) : 0;
    const std::size_t hi = std::min(uk, np - 1);
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += p.values[i] * q.values[uk - i];
    out[uk] = acc * step;
  }
  const int count = static_cast<int>(out.size());
  return QuasiDistribution::on_grid(p.space, p.labels, {p.origin(0) + q.origin(0)}, {step}, {count}, std::move(out));
}

double interpolate_1d(const QuasiDistribution& q, double x) {
  require(q.dims() == 1, "interpolate_1d needs a one-dimensional distribution");
  const double u = (x - q.origin(0)) / q.basis(0, 0);
  if (u < 0.0 || u > q.counts[0] - 1) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(u), q.values.size() - 2);
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * q.values[i] + w * q.values[i + 1];
}

QuasiDistribution refine_2x(const QuasiDistribution& q) {
  QuasiDistribution out = q;
  for (int d = 0; d < q.dims(); ++d) {
    const auto n = static_cast<std::size_t>(out.counts[static_cast<std::size_t>(d)]);
    std::size_t inner = 1;
    for (int e = d + 1; e < q.dims(); ++e) inner *= static_cast<std::size_t>(out.counts[static_cast<std::size_t>(e)]);
    const std::size_t outer = out.values.size() / (n * inner);
    const std::size_t m = 2 * n - 1;
    std::vector<double> next(outer * m * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < inner; ++r) {
          const std::size_t a = (o * n + i / 2) * inner + r;
          next[(o * m + i) * inner + r] = i % 2 == 0 ? out.values[a] : 0.5 * (out.values[a] + out.values[a + inner]);
        }
      }
    }
    out.values = std::move(next);
    out.counts[static_cast<std::size_t>(d)] = static_cast<int>(m);
    out.basis.col(d) *= 0.5;
  }
  return out;
}

}  // namespace cher
