#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aac::testing {

struct BruteWilcoxon {
  double w_plus = 0.0;
  double p = 0.0;
  std::size_t n = 0;
};

/// Drops zeros, assigns mid-ranks by counting, and enumerates all 2^n sign
/// patterns of the ranks.
BruteWilcoxon wilcoxon_brute_force(const std::vector<double>& diffs);

/// Number of start offsets 0, hop, 2 hop, ... whose window fits in T frames.
std::size_t enumerate_window_starts(std::size_t frames, std::size_t window, std::size_t hop);

using Tokens = std::vector<std::string>;

/// Direct transcription of the CIDEr-D definition: per-clip n-gram TF-IDF
/// vectors (idf over clips), clipped dot product, cosine, Gaussian length
/// penalty sigma 6, mean over n = 1..4 and references, times 10.
std::vector<double> cider_d_oracle(const std::vector<Tokens>& candidates,
                                   const std::vector<std::vector<Tokens>>& references);

}  // namespace aac::testing
