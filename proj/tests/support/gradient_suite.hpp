#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gradcheck.hpp"

namespace aac::testing {

/// One finite-difference case: a differentiable operation or model path.
struct GradientCase {
  std::string name;
  std::function<GradCheckReport()> run;
};

/// Every differentiable operation plus the end-to-end tiny model for each adapter.
std::vector<GradientCase> gradient_suite();

inline constexpr double kGradientTolerance = 1e-4;

}  // namespace aac::testing
