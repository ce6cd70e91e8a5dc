#include "aac/numerics/adam.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace aac {

void OptimizerConfig::validate() const {
  // alpha = 0 is accepted as an explicit no-op optimizer.
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument(fmt::format("adam: alpha must be >= 0, got {}", alpha));
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw std::invalid_argument(fmt::format("adam: beta1 must be in [0, 1), got {}", beta1));
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw std::invalid_argument(fmt::format("adam: beta2 must be in [0, 1), got {}", beta2));
  if (!(epsilon > 0.0)) throw std::invalid_argument(fmt::format("adam: epsilon must be > 0, got {}", epsilon));
}

Adam::Adam(std::vector<Tensor> params, OptimizerConfig config) : params_(std::move(params)), config_(config) {
  config_.validate();
  for (const auto& p : params_) {
    if (!p.requires_grad()) throw std::invalid_argument("adam: parameter does not require grad");
    first_moment_.emplace_back(p.numel(), 0.0);
    second_moment_.emplace_back(p.numel(), 0.0);
  }
}

void Adam::step(std::uint64_t step_count) {
  if (step_count == 0) throw std::invalid_argument("adam: step_count is 1-based");
  const double t = static_cast<double>(step_count);
  const double correction1 = 1.0 - std::pow(config_.beta1, t);
  const double correction2 = 1.0 - std::pow(config_.beta2, t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto& p = params_[k];
    if (!p.has_grad()) throw std::logic_error("adam: parameter has no grad buffer");
    auto values = p.mutable_data();
    const auto grad = p.grad();
    auto& m = first_moment_[k];
    auto& v = second_moment_[k];
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double g = grad[i];
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      values[i] -= config_.alpha * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

}  // namespace aac
