#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tubenav {

struct GradcheckResult {
  std::string potential;
  std::size_t points = 0;
  double max_relative_error = 0.0;
  double tolerance = 1e-5;
  bool pass() const { return max_relative_error <= tolerance; }
};

// Analytic gradients of the pair barrier, the panel potential and the unified tube barrier against
// central differences at random valid points.
std::vector<GradcheckResult> gradient_battery(std::size_t points, std::uint64_t seed = 7);

}  // namespace tubenav
