#include "aac/model/layers.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "aac/numerics/ops.hpp"

namespace aac {

Tensor xavier_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> values(fan_in * fan_out);
  for (double& v : values) v = rng.uniform(-bound, bound);
  return Tensor::from({fan_in, fan_out}, std::move(values), true);
}

Tensor positional_encoding(std::size_t length, std::size_t dim) {
  if (dim == 0 || dim % 2 != 0) throw std::invalid_argument(fmt::format("positional encoding needs an even dimension, got {}", dim));
  if (length == 0) throw std::invalid_argument("positional encoding needs a positive length");
  std::vector<double> values(length * dim);
  for (std::size_t i = 0; i < dim / 2; ++i) {
    const double rate = std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(dim));
    for (std::size_t pos = 0; pos < length; ++pos) {
      const double angle = static_cast<double>(pos) / rate;
      values[pos * dim + 2 * i] = std::sin(angle);
      values[pos * dim + 2 * i + 1] = std::cos(angle);
    }
  }
  return Tensor::from({length, dim}, std::move(values));
}

Linear Linear::init(std::size_t in, std::size_t out, Rng& rng) {
  return Linear{xavier_uniform(in, out, rng), Tensor::zeros({out}, true)};
}

Tensor Linear::forward(const Tensor& x) const {
  if (x.cols() != in_features()) {
    throw std::invalid_argument(fmt::format("linear layer expects {} input features, got {}", in_features(), x.cols()));
  }
  return add_row_vector(matmul(x, weight), bias);
}

void Linear::collect(ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".weight", weight});
  out.push_back({prefix + ".bias", bias});
}

LayerNormParams LayerNormParams::init(std::size_t dim, double eps) {
  return LayerNormParams{Tensor::full({dim}, 1.0, true), Tensor::zeros({dim}, true), eps};
}

Tensor LayerNormParams::forward(const Tensor& x) const { return layer_norm(x, gain, bias, eps); }

void LayerNormParams::collect(ParamList& out, const std::string& prefix) const {
  out.push_back({prefix + ".gain", gain});
  out.push_back({prefix + ".bias", bias});
}

AttentionParams AttentionParams::init(std::size_t width, std::size_t memory_dim, Rng& rng) {
  AttentionParams p;
  p.query = Linear::init(width, width, rng);
  p.key = Linear::init(memory_dim, width, rng);
  p.value = Linear::init(memory_dim, width, rng);
  p.output = Linear::init(width, width, rng);
  return p;
}

void AttentionParams::collect(ParamList& out, const std::string& prefix) const {
  query.collect(out, prefix + ".query");
  key.collect(out, prefix + ".key");
  value.collect(out, prefix + ".value");
  output.collect(out, prefix + ".output");
}

AttentionMask AttentionMask::causal(std::size_t length) {
  AttentionMask mask{length, length, std::vector<bool>(length * length, false)};
  for (std::size_t i = 0; i < length; ++i)
    for (std::size_t j = 0; j <= i; ++j) mask.allowed[i * length + j] = true;
  return mask;
}

Tensor multi_head_attention(const AttentionParams& params, const Tensor& queries, const Tensor& keys_values,
                            std::size_t heads, const AttentionMask* mask) {
  const std::size_t width = params.query.out_features();
  if (heads == 0 || width % heads != 0) {
    throw std::invalid_argument(fmt::format("attention width {} is not divisible by {} heads", width, heads));
  }
  const std::size_t lq = queries.rows(), lk = keys_values.rows();
  if (mask && (mask->queries != lq || mask->keys != lk)) {
    throw std::invalid_argument(
        fmt::format("attention mask is {}x{} but scores are {}x{}", mask->queries, mask->keys, lq, lk));
  }
  const std::size_t head_dim = width / heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));

  const Tensor q = params.query.forward(queries);
  const Tensor k = params.key.forward(keys_values);
  const Tensor v = params.value.forward(keys_values);

  std::vector<Tensor> head_outputs;
  head_outputs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t off = h * head_dim;
    const Tensor qh = slice_cols(q, off, head_dim);
    const Tensor kh = slice_cols(k, off, head_dim);
    const Tensor vh = slice_cols(v, off, head_dim);
    const Tensor scores = scale(matmul(qh, transpose(kh)), inv_sqrt);
    const Tensor weights = mask ? masked_softmax_rows(scores, mask->allowed) : softmax(scores, 1);
    head_outputs.push_back(matmul(weights, vh));
  }
  const Tensor merged = heads == 1 ? head_outputs.front() : concat_cols(head_outputs);
  return params.output.forward(merged);
}

}  // namespace aac
