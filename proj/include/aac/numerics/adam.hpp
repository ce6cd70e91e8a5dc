#pragma once

#include <cstdint>
#include <vector>

#include "aac/numerics/tensor.hpp"

namespace aac {

struct OptimizerConfig {
  double alpha = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  /// Throws std::invalid_argument unless 0 <= alpha, 0 <= beta < 1, epsilon > 0.
  void validate() const;
};

/// Adam with bias-corrected moments. Moment buffers live here and persist
/// across step() calls; parameters are shared handles, updated in place.
class Adam {
 public:
  Adam(std::vector<Tensor> params, OptimizerConfig config);

  /// `step_count` is the 1-based update index driving bias correction.
  void step(std::uint64_t step_count);
  void zero_grad();

  const OptimizerConfig& config() const { return config_; }
  const std::vector<Tensor>& params() const { return params_; }

 private:
  std::vector<Tensor> params_;
  OptimizerConfig config_;
  std::vector<std::vector<double>> first_moment_;
  std::vector<std::vector<double>> second_moment_;
};

}  // namespace aac
