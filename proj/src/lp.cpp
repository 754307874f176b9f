#include "cher/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseCholesky>

namespace cher {

namespace {

double max_step(const RVector& v, const RVector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

class NormalSolver {
 public:
  explicit NormalSolver(const SparseMatrix& a) : a_(a), at_(a.transpose()) {}

  // Factorizes A diag(d) A^T (plus a tiny regularization).
  void factorize(const RVector& d) {
    SparseMatrix scaled = a_ * d.asDiagonal();
    SparseMatrix m = scaled * at_;
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.coeffRef(i, i) += 1e-14 * (1.0 + m.coeff(i, i));
    if (!analyzed_) {
      ldlt_.analyzePattern(m);
      analyzed_ = true;
    }
    ldlt_.factorize(m);
    if (ldlt_.info() != Eigen::Success) throw NumericalError("interior-point normal equations are singular");
  }

  RVector solve(const RVector& rhs) const { return ldlt_.solve(rhs); }

 private:
  const SparseMatrix& a_;
  SparseMatrix at_;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt_;
  bool analyzed_ = false;
};

}  // namespace

LPSolution solve_lp(const LinearProgram& lp, const LPOptions& options) {
  const SparseMatrix& a = lp.a;
  const Eigen::Index n = a.cols();
  require(lp.b.size() == a.rows() && lp.c.size() == n, "linear program has inconsistent shapes");

  NormalSolver normal(a);
  // Mehrotra's starting point.
  normal.factorize(RVector::Ones(n));
  RVector x = a.transpose() * normal.solve(lp.b);
  RVector y = normal.solve(a * lp.c);
  RVector z = lp.c - a.transpose() * y;
  const double dx = std::max(-1.5 * x.minCoeff(), 0.0);
  const double dz = std::max(-1.5 * z.minCoeff(), 0.0);
  x.array() += dx;
  z.array() += dz;
  const double xz = x.dot(z);
  x.array() += 0.5 * xz / std::max(z.sum(), 1e-300);
  z.array() += 0.5 * xz / std::max(x.sum(), 1e-300);
  x = x.cwiseMax(1e-8);
  z = z.cwiseMax(1e-8);

  const double b_norm = 1.0 + lp.b.norm();
  const double c_norm = 1.0 + lp.c.norm();
  LPSolution sol;
  for (int it = 0; it < options.max_iterations; ++it) {
    const RVector rp = lp.b - a * x;
    const RVector rd = lp.c - a.transpose() * y - z;
    const double mu = x.dot(z) / static_cast<double>(n);
    const double primal = lp.c.dot(x);
    const double dual = lp.b.dot(y);
    sol.primal_residual = rp.norm() / b_norm;
    sol.dual_residual = rd.norm() / c_norm;
    sol.gap = std::abs(primal - dual) / (1.0 + std::abs(primal));
    sol.iterations = it;
    if (sol.primal_residual < options.tolerance && sol.dual_residual < options.tolerance &&
        sol.gap < options.tolerance) {
      sol.x = x;
      sol.y = y;
      sol.z = z;
      sol.objective = primal;
      return sol;
    }

    const RVector d = x.cwiseQuotient(z);
    normal.factorize(d);
    const auto direction = [&](const RVector& rc, RVector& ddx, RVector& ddy, RVector& ddz) {
      const RVector zinv_rc = rc.cwiseQuotient(z);
      const RVector rhs = rp + a * d.cwiseProduct(rd) - a * zinv_rc;
      ddy = normal.solve(rhs);
      ddz = rd - a.transpose() * ddy;
      ddx = zinv_rc - d.cwiseProduct(ddz);
    };

    RVector ax, ay, az;
    const RVector rc_aff = -x.cwiseProduct(z);
    direction(rc_aff, ax, ay, az);
    const double ap_aff = max_step(x, ax);
    const double ad_aff = max_step(z, az);
    const double mu_aff = (x + ap_aff * ax).dot(z + ad_aff * az) / static_cast<double>(n);
    const double sigma = std::pow(mu_aff / mu, 3.0);

    RVector cx, cy, cz;
    const RVector rc = rc_aff - ax.cwiseProduct(az) + RVector::Constant(n, sigma * mu);
    direction(rc, cx, cy, cz);
    const double eta = std::clamp(1.0 - mu, 0.9, 0.9999);
    const double ap = std::min(1.0, eta * max_step(x, cx));
    const double ad = std::min(1.0, eta * max_step(z, cz));
    x += ap * cx;
    y += ad * cy;
    z += ad * cz;
    if (!x.allFinite() || !y.allFinite() || !z.allFinite()) {
      throw NumericalError("interior-point iterate became non-finite at iteration " + std::to_string(it));
    }
  }
  throw NumericalError("interior-point solver did not converge in " + std::to_string(options.max_iterations) +
                       " iterations (primal " + std::to_string(sol.primal_residual) + ", dual " +
                       std::to_string(sol.dual_residual) + ", gap " + std::to_string(sol.gap) + ")");
}

}  // namespace cher
