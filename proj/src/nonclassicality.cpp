#include "cher/nonclassicality.hpp"

#include <cmath>

#include "cher/lp.hpp"

namespace cher {

namespace {

GridProvenance provenance(const QuasiDistribution& q) {
  GridProvenance g;
  g.labels = q.labels;
  g.counts = q.counts;
  for (int d = 0; d < q.dims(); ++d) {
    const double step = q.basis.col(d).norm();
    g.steps.push_back(step);
    g.spans.push_back(step * (q.counts[static_cast<std::size_t>(d)] - 1));
  }
  g.deltas = q.deltas;
  return g;
}

std::string delta_note(const QuasiDistribution& q) {
  if (q.deltas.empty()) return "";
  std::string note = "point masses along";
  for (const auto& d : q.deltas) note += " " + d.label;
  return note + " are nonnegative and excluded from the negativity";
}

double delta_mass_product(const QuasiDistribution& q) {
  double m = 1.0;
  for (const auto& d : q.deltas) m *= d.mass;
  return m;
}

double total_variation(const QuasiDistribution& q) {
  double s = 0.0;
  for (double v : q.values) s += std::abs(v);
  return s * q.cell_volume() * delta_mass_product(q);
}

void check_normalized(const QuasiDistribution& q, double tolerance) {
  const double m = q.mass();
  if (std::abs(m - 1.0) > tolerance) {
    throw ValidationError("distribution is not normalized: total mass " + std::to_string(m));
  }
}

}  // namespace

bool is_simple_root_product(const DephasingFactors& f, const RootSystem& roots, double tolerance) {
  for (int m : roots.positive_indices) {
    const RVector c = roots.simple_coordinates(m);
    const auto& phi = f.at(m);
    for (std::size_t i = 0; i < f.times.size(); ++i) {
      Complex prod = 1.0;
      for (Eigen::Index s = 0; s < c.size(); ++s) {
        const int power = static_cast<int>(std::lround(c(s)));
        for (int p = 0; p < power; ++p) prod *= f.at(roots.simple_indices[static_cast<std::size_t>(s)])[i];
      }
      if (std::abs(prod - phi[i]) > tolerance) return false;
    }
  }
  return true;
}

std::string to_string(NonclassicalityResult::Method m) {
  return m == NonclassicalityResult::Method::negativity ? "negativity" : "lp-oracle";
}

double variational_distance(const QuasiDistribution& p, const QuasiDistribution& q) {
  require(p.space == q.space && p.labels == q.labels && p.counts == q.counts,
          "variational_distance: grids differ");
  require(p.dims() == 0 || ((p.origin - q.origin).cwiseAbs().maxCoeff() <= 1e-12 &&
                            (p.basis - q.basis).cwiseAbs().maxCoeff() <= 1e-12),
          "variational_distance: grids differ");
  require(p.deltas.size() == q.deltas.size(), "variational_distance: delta structure differs");
  bool singular = false;
  for (std::size_t i = 0; i < p.deltas.size(); ++i) {
    require(p.deltas[i].label == q.deltas[i].label, "variational_distance: delta structure differs");
    if (std::abs(p.deltas[i].location - q.deltas[i].location) > 1e-12) singular = true;
  }
  if (singular) return 0.5 * (total_variation(p) + total_variation(q));
  const double mp = delta_mass_product(p);
  const double mq = delta_mass_product(q);
  double s = 0.0;
  for (std::size_t i = 0; i < p.values.size(); ++i) s += std::abs(p.values[i] * mp - q.values[i] * mq);
  return 0.5 * s * p.cell_volume();
}

NonclassicalityResult nonclassicality_negativity(const QuasiDistribution& q, const MeasureOptions& options) {
  q.validate();
  check_normalized(q, options.normalization_tolerance);
  NonclassicalityResult r;
  r.method = NonclassicalityResult::Method::negativity;
  r.value = q.negative_mass();
  r.grid = provenance(q);
  r.delta_note = delta_note(q);
  return r;
}

NonclassicalityResult nonclassicality_lp(const QuasiDistribution& q, const MeasureOptions& options) {
  q.validate();
  check_normalized(q, options.normalization_tolerance);
  const std::size_t cells = q.cells();
  if (cells > options.lp_cell_cap) {
    throw ValidationError("LP oracle cell cap exceeded: " + std::to_string(cells) + " cells > " +
                          std::to_string(options.lp_cell_cap));
  }
  const auto n = static_cast<Eigen::Index>(cells);
  const double dv = q.cell_volume();
  const double scale = delta_mass_product(q);

  // Variables u = p dV (cell masses), s+, s-; rows u - s+ + s- = q dV, sum u = 1.
  LinearProgram lp;
  lp.a.resize(n + 1, 3 * n);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(4 * n));
  for (Eigen::Index i = 0; i < n; ++i) {
    entries.emplace_back(i, i, 1.0);
    entries.emplace_back(i, n + i, -1.0);
    entries.emplace_back(i, 2 * n + i, 1.0);
    entries.emplace_back(n, i, 1.0);
  }
  lp.a.setFromTriplets(entries.begin(), entries.end());
  lp.b.resize(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) lp.b(i) = q.values[static_cast<std::size_t>(i)] * dv * scale;
  lp.b(n) = 1.0;
  lp.c = RVector::Zero(3 * n);
  lp.c.segment(n, 2 * n).setConstant(0.5);

  const LPSolution sol = solve_lp(lp);
  NonclassicalityResult r;
  r.method = NonclassicalityResult::Method::lp_oracle;
  r.value = std::max(sol.objective, 0.0);
  r.grid = provenance(q);
  r.delta_note = delta_note(q);
  r.argmin.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) r.argmin[i] = sol.x(static_cast<Eigen::Index>(i)) / (dv * scale);
  return r;
}

double product_negativity(const std::vector<std::pair<double, double>>& positive_negative) {
  double plus = 1.0, minus = 0.0;
  for (const auto& [p, m] : positive_negative) {
    const double next_plus = plus * p + minus * m;
    const double next_minus = plus * m + minus * p;
    plus = next_plus;
    minus = next_minus;
  }
  return minus;
}

NonclassicalityResult nonclassicality_of_dynamics(const DephasingFactors& factors, const RootSystem& roots,
                                                  const DynamicsOptions& options) {
  require(factors.n == roots.n, "factor dimension does not match the root system");
  MeasureOptions measure;

  if (is_simple_root_product(factors, roots, options.independence_tolerance)) {
    NonclassicalityResult r;
    r.method = NonclassicalityResult::Method::negativity;
    std::vector<std::pair<double, double>> parts, refined;
    for (int s : roots.simple_indices) {
      const std::string label = "x" + std::to_string(s);
      InversionReport rep;
      const QuasiDistribution q = invert_1d(factors.times, factors.at(s), label, options.inversion, &rep);
      check_normalized(q, measure.normalization_tolerance);
      parts.emplace_back(q.positive_mass(), q.negative_mass());
      const GridProvenance g = provenance(q);
      for (std::size_t d = 0; d < g.labels.size(); ++d) {
        r.grid.labels.push_back(g.labels[d]);
        r.grid.steps.push_back(g.steps[d]);
        r.grid.spans.push_back(g.spans[d]);
        r.grid.counts.push_back(g.counts[d]);
      }
      for (const auto& d : q.deltas) r.grid.deltas.push_back(d);
      if (roots.simple_indices.size() == 1) r.inversion = rep;
      if (options.refinement_check) {
        Inversion1DOptions fine = options.inversion;
        fine.refine *= 2;
        fine.forward_check = false;
        const QuasiDistribution qf = invert_1d(factors.times, factors.at(s), label, fine);
        refined.emplace_back(qf.positive_mass(), qf.negative_mass());
      }
    }
    r.value = product_negativity(parts);
    if (options.refinement_check) r.refinement_delta = product_negativity(refined) - r.value;
    if (!r.grid.deltas.empty()) {
      r.delta_note = "point masses are nonnegative and excluded from the negativity";
    }
    return r;
  }

  if (factors.n == 4) {
    InversionReport rep;
    const QuasiDistribution q = invert_pair_correlated(factors, options.sd, options.bath, options.pair, &rep);
    NonclassicalityResult r = nonclassicality_negativity(q, measure);
    r.inversion = rep;
    return r;
  }
  throw ValidationError("no inversion strategy for these su(" + std::to_string(factors.n) +
                        ") factors: they are neither independent nor the qubit-pair model");
}

}  // namespace cher
