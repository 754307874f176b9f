#pragma once

// Quasi-probability distributions on a lattice, optionally multiplied by
// point masses along extra coordinates.

#include <string>
#include <vector>

#include "cher/common.hpp"
#include "cher/kernels.hpp"

namespace cher {

enum class CoordinateSpace { lambda, simple_root };

std::string to_string(CoordinateSpace s);
CoordinateSpace parse_space(const std::string& name);

/// Point mass factor delta(label - location) with the given mass.
struct DeltaFactor {
  std::string label;
  double location = 0.0;
  double mass = 1.0;
};

struct QuasiDistribution {
  CoordinateSpace space = CoordinateSpace::simple_root;
  std::vector<std::string> labels;  // dense axes
  RVector origin;
  RMatrix basis;                    // column d is the lattice step along axis d
  std::vector<int> counts;
  std::vector<double> values;       // row-major, last axis fastest
  std::vector<DeltaFactor> deltas;

  /// Axis-aligned grid: point(i) = min + i * step per axis.
  static QuasiDistribution on_grid(CoordinateSpace space, std::vector<std::string> labels,
                                   const std::vector<double>& mins, const std::vector<double>& steps,
                                   std::vector<int> counts, std::vector<double> values);
  /// Distribution made only of point masses.
  static QuasiDistribution point_masses(CoordinateSpace space, std::vector<DeltaFactor> deltas);

  int dims() const { return static_cast<int>(counts.size()); }
  std::size_t cells() const;
  double cell_volume() const;
  bool axis_aligned(double tolerance = 1e-14) const;
  RVector point(std::size_t cell) const;
  /// Coordinates of axis d for axis-aligned grids.
  std::vector<double> axis(int d) const;

  /// Dense integral times the product of delta masses.
  double mass() const;
  double negative_mass() const;
  double positive_mass() const;
  double min_value() const;

  kernels::LatticeView lattice() const;
  /// Shape checks; throws ValidationError on inconsistent fields.
  void validate() const;
};

/// Same lattice, labels and deltas (locations and masses within tolerance).
bool same_support(const QuasiDistribution& a, const QuasiDistribution& b, double tolerance = 1e-12);

/// a * p + (1 - a) * q on a shared support.
QuasiDistribution mix(const QuasiDistribution& p, const QuasiDistribution& q, double a);

/// One-dimensional marginal along dense axis d (axis-aligned grids only).
QuasiDistribution marginal(const QuasiDistribution& q, int axis);

/// Discrete convolution of two 1-D distributions with equal steps.
QuasiDistribution convolve_1d(const QuasiDistribution& p, const QuasiDistribution& q);

/// Linear interpolation of a 1-D distribution at x (0 outside the grid).
double interpolate_1d(const QuasiDistribution& q, double x);

/// Each axis refined by 2 with multilinear interpolation at the new nodes.
QuasiDistribution refine_2x(const QuasiDistribution& q);

}  // namespace cher
