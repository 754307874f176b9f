#pragma once

// Nonclassicality of a quasi-distribution: the variational distance to the
// nearest legitimate probability distribution on the same support.

#include <optional>
#include <string>
#include <vector>

#include "cher/common.hpp"
#include "cher/dephasing.hpp"
#include "cher/lie.hpp"
#include "cher/quasi.hpp"
#include "cher/retrieval.hpp"

namespace cher {

struct GridProvenance {
  std::vector<std::string> labels;
  std::vector<double> steps;
  std::vector<double> spans;
  std::vector<int> counts;
  std::vector<DeltaFactor> deltas;
};

struct NonclassicalityResult {
  enum class Method { negativity, lp_oracle };

  double value = 0.0;
  Method method = Method::negativity;
  GridProvenance grid;
  std::string delta_note;
  std::optional<double> refinement_delta;  // change of value under 2x grid refinement
  std::optional<double> span_delta;        // change of value under span doubling
  std::vector<double> argmin;              // LP only: the closest probability density
  std::optional<InversionReport> inversion;
};

std::string to_string(NonclassicalityResult::Method m);

/// (1/2) int |p - q| plus (1/2) sum |delta mass differences| on a shared
/// support; point masses at different locations are mutually singular.
double variational_distance(const QuasiDistribution& p, const QuasiDistribution& q);

struct MeasureOptions {
  double normalization_tolerance = 1e-6;
  std::size_t lp_cell_cap = 4096;
};

/// int max(-p, 0) over the dense grid (deltas are nonnegative point masses).
NonclassicalityResult nonclassicality_negativity(const QuasiDistribution& q, const MeasureOptions& options = {});

/// min_p (1/2) sum |q_i - p_i| dV subject to p >= 0, sum p_i dV = 1, solved
/// as a linear program.
NonclassicalityResult nonclassicality_lp(const QuasiDistribution& q, const MeasureOptions& options = {});

/// Negativity of a product of independent quasi-distributions given the
/// positive and negative masses of each factor.
double product_negativity(const std::vector<std::pair<double, double>>& positive_negative);

/// True when every positive-root factor equals the product of simple-root
/// factors given by its simple-root coordinates.
bool is_simple_root_product(const DephasingFactors& f, const RootSystem& roots, double tolerance = 1e-10);

struct DynamicsOptions {
  Inversion1DOptions inversion;
  PairInversionOptions pair;
  SpectralDensity sd = SpectralDensity::ohmic(1.0);  // consulted by the pair strategy
  BathParams bath;
  bool refinement_check = true;
  double independence_tolerance = 1e-10;
};

/// Inverts the factors (delta, independent 1-D products, or the gated pair
/// ansatz) and measures the result by negativity.
NonclassicalityResult nonclassicality_of_dynamics(const DephasingFactors& factors, const RootSystem& roots,
                                                  const DynamicsOptions& options = {});

}  // namespace cher
