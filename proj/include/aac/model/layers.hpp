#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aac/numerics/rng.hpp"
#include "aac/numerics/tensor.hpp"

namespace aac {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};
using ParamList = std::vector<NamedTensor>;

/// Uniform Xavier init: U(-a, a), a = sqrt(6 / (fan_in + fan_out)).
Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

/// Sinusoidal table: (pos, 2i) = sin(pos / 10000^(2i/dim)), (pos, 2i+1) = cos(same).
/// dim must be even.
Tensor positional_encoding(std::size_t length, std::size_t dim);

struct Linear {
  Tensor weight;  // in x out
  Tensor bias;    // out

  static Linear init(std::size_t in, std::size_t out, Rng& rng);
  std::size_t in_features() const { return weight.rows(); }
  std::size_t out_features() const { return weight.cols(); }
  Tensor forward(const Tensor& x) const;
  void collect(ParamList& out, const std::string& prefix) const;
};

struct LayerNormParams {
  Tensor gain;
  Tensor bias;
  double eps = 1e-5;

  static LayerNormParams init(std::size_t dim, double eps);
  Tensor forward(const Tensor& x) const;
  void collect(ParamList& out, const std::string& prefix) const;
};

/// Query/key/value/output projections of one multi-head attention layer.
/// Keys and values may come from a memory of a different width than the
/// queries; everything is projected to `width`.
struct AttentionParams {
  Linear query;
  Linear key;
  Linear value;
  Linear output;

  static AttentionParams init(std::size_t width, std::size_t memory_dim, Rng& rng);
  void collect(ParamList& out, const std::string& prefix) const;
};

/// Row-major Lq x Lk allowed-position mask.
struct AttentionMask {
  std::size_t queries = 0;
  std::size_t keys = 0;
  std::vector<bool> allowed;

  static AttentionMask causal(std::size_t length);
};

/// Scaled dot-product attention per head (scale 1/sqrt(head_dim)), heads
/// concatenated and projected back to the query width. Masked positions get
/// zero weight; a fully masked row is an error.
Tensor multi_head_attention(const AttentionParams& params, const Tensor& queries, const Tensor& keys_values,
                            std::size_t heads, const AttentionMask* mask = nullptr);

}  // namespace aac
