#include "cher/common.hpp"

#include <cmath>

namespace cher {

bool is_time_grid(const std::vector<double>& times) {
  if (times.empty() || times.front() != 0.0) return false;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) return false;
  }
  return true;
}

bool is_uniform_grid(const std::vector<double>& times, double rel_tol) {
  if (times.size() < 2) return true;
  const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs((times[i] - times[i - 1]) - step) > rel_tol * std::abs(step) + 1e-15) return false;
  }
  return true;
}

}  // namespace cher
