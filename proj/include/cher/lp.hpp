#pragma once

// Primal-dual interior-point solver (Mehrotra predictor-corrector) for linear
// programs in standard form: minimize c.x subject to A x = b, x >= 0.

#include <Eigen/SparseCore>

#include "cher/common.hpp"

namespace cher {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct LinearProgram {
  SparseMatrix a;
  RVector b;
  RVector c;
};

struct LPOptions {
  double tolerance = 1e-11;  // relative primal/dual infeasibility and gap
  int max_iterations = 200;
};

struct LPSolution {
  RVector x;
  RVector y;
  RVector z;
  double objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

/// Throws NumericalError when the iteration limit is reached without
/// meeting the tolerance.
LPSolution solve_lp(const LinearProgram& lp, const LPOptions& options = {});

}  // namespace cher
