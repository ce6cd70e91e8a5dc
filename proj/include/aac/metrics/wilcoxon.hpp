#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace aac {

enum class WilcoxonMethod { exact, normal_approx };
std::string_view to_string(WilcoxonMethod method);

struct SignificanceResult {
  double w_plus = 0.0;          // sum of ranks of positive differences
  std::size_t n_effective = 0;  // nonzero differences
  double p_one_sided = 1.0;     // P(W+ >= observed) under the null
  WilcoxonMethod method = WilcoxonMethod::exact;
};

/// One-sided Wilcoxon signed-rank test against a positive median difference.
/// Zeros are dropped and tied magnitudes share mid-ranks. Up to `exact_limit`
/// nonzero differences the null distribution of W+ is counted exactly over
/// all 2^n sign assignments (given the observed ranks); above it the
/// tie-corrected normal approximation with continuity correction is used.
/// Throws std::invalid_argument when every difference is zero.
SignificanceResult wilcoxon_one_sided(std::span<const double> diffs, std::size_t exact_limit = 20);

}  // namespace aac
