#pragma once

#include <cstddef>

#include <json.hpp>

#include "aac/model/types.hpp"

namespace aac {

struct AdapterConfig {
  AdapterKind kind = AdapterKind::identity;
  std::size_t input_dim = 0;  // F'
  std::size_t hidden = 256;   // mlp
  std::size_t heads = 4;      // mha
  std::size_t head_dim = 128; // mha
  std::size_t output_dim = 0; // F''

  /// identity: output_dim == input_dim. mlp/mha: output_dim == model_width,
  /// and for mha heads * head_dim == output_dim.
  void validate(std::size_t model_width) const;
};

enum class FeedForwardKind { linear, standard };

struct DecoderConfig {
  std::size_t num_blocks = 3;
  std::size_t heads = 4;
  std::size_t head_dim = 128;
  std::size_t model_width = 512;
  std::size_t max_caption_len = 30;
  std::size_t vocab_size = 0;  // W
  std::size_t word_dim = 300;  // W'
  // linear: one linear layer then layer norm inside each block.
  // standard: Transformer two-layer ReLU FFN of width ff_hidden.
  FeedForwardKind feed_forward = FeedForwardKind::linear;
  std::size_t ff_hidden = 2048;
  // Dropout is not applied; the value is carried for config compatibility and must be 0.
  double dropout = 0.0;
  double layer_norm_eps = 1e-5;

  void validate() const;
};

void to_json(nlohmann::json& j, const AdapterConfig& c);
void from_json(const nlohmann::json& j, AdapterConfig& c);
void to_json(nlohmann::json& j, const DecoderConfig& c);
void from_json(const nlohmann::json& j, DecoderConfig& c);

}  // namespace aac
