#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cher {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Input rejected before any numerical work (maps to CLI exit code 1).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed or a result violated a checked property
/// (maps to CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default absolute tolerance used by the algebraic checks.
inline constexpr double kDefaultTolerance = 1e-10;

inline constexpr double kPi = 3.14159265358979323846;

/// x - sin x without cancellation near 0.
inline double x_minus_sin(double x) {
  if (x > -1e-2 && x < 1e-2) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
  }
  return x - std::sin(x);
}

/// 1 - cos x as 2 sin^2(x/2).
inline double one_minus_cos(double x) {
  const double s = std::sin(0.5 * x);
  return 2.0 * s * s;
}

/// Throws ValidationError with `message` when `condition` is false.
inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

/// True if `times` starts at exactly zero and is strictly increasing.
bool is_time_grid(const std::vector<double>& times);

/// True if `times` is uniformly spaced within `rel_tol` of the mean step.
bool is_uniform_grid(const std::vector<double>& times, double rel_tol = 1e-9);

}  // namespace cher
