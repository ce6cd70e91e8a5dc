#pragma once

#include <variant>

#include "aac/model/config.hpp"
#include "aac/model/layers.hpp"
#include "aac/model/types.hpp"

namespace aac {

struct IdentityAdapter {};

/// Two-layer perceptron applied independently at every time step.
struct MlpAdapter {
  Linear hidden;
  Linear output;
};

/// Linear reduction F' -> width plus sinusoidal positions, followed by one
/// post-norm Transformer encoder layer: self-attention, residual, layer norm,
/// linear layer, residual, layer norm.
struct MhaAdapter {
  Linear reduce;
  AttentionParams attention;
  LayerNormParams attention_norm;
  Linear feed_forward;
  LayerNormParams feed_forward_norm;
};

struct AdapterParams {
  AdapterConfig config;
  std::variant<IdentityAdapter, MlpAdapter, MhaAdapter> layers;

  static AdapterParams init(const AdapterConfig& config, double layer_norm_eps, Rng& rng);
  /// T' x F' -> T' x F''.
  Tensor forward(const Tensor& z) const;
  void collect(ParamList& out, const std::string& prefix) const;
};

AdaptedSequence apply_adapter(const EmbeddingSequence& z, const AdapterParams& params);

}  // namespace aac
