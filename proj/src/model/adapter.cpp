#include "aac/model/adapter.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "aac/numerics/ops.hpp"

namespace aac {

AdapterParams AdapterParams::init(const AdapterConfig& config, double layer_norm_eps, Rng& rng) {
  AdapterParams p{config, IdentityAdapter{}};
  switch (config.kind) {
    case AdapterKind::identity:
      break;
    case AdapterKind::mlp:
      p.layers = MlpAdapter{Linear::init(config.input_dim, config.hidden, rng),
                            Linear::init(config.hidden, config.output_dim, rng)};
      break;
    case AdapterKind::mha: {
      MhaAdapter m;
      m.reduce = Linear::init(config.input_dim, config.output_dim, rng);
      m.attention = AttentionParams::init(config.output_dim, config.output_dim, rng);
      m.attention_norm = LayerNormParams::init(config.output_dim, layer_norm_eps);
      m.feed_forward = Linear::init(config.output_dim, config.output_dim, rng);
      m.feed_forward_norm = LayerNormParams::init(config.output_dim, layer_norm_eps);
      p.layers = std::move(m);
      break;
    }
  }
  return p;
}

Tensor AdapterParams::forward(const Tensor& z) const {
  if (z.cols() != config.input_dim) {
    throw std::invalid_argument(
        fmt::format("adapter expects {}-dimensional embeddings, got {}", config.input_dim, z.cols()));
  }
  if (std::holds_alternative<IdentityAdapter>(layers)) return z;
  if (const auto* mlp = std::get_if<MlpAdapter>(&layers)) {
    return mlp->output.forward(relu(mlp->hidden.forward(z)));
  }
  const auto& mha = std::get<MhaAdapter>(layers);
  const Tensor x = add(mha.reduce.forward(z), positional_encoding(z.rows(), config.output_dim));
  const Tensor attended = mha.attention_norm.forward(add(x, multi_head_attention(mha.attention, x, x, config.heads)));
  return mha.feed_forward_norm.forward(add(attended, mha.feed_forward.forward(attended)));
}

void AdapterParams::collect(ParamList& out, const std::string& prefix) const {
  if (const auto* mlp = std::get_if<MlpAdapter>(&layers)) {
    mlp->hidden.collect(out, prefix + ".hidden");
    mlp->output.collect(out, prefix + ".output");
  } else if (const auto* mha = std::get_if<MhaAdapter>(&layers)) {
    mha->reduce.collect(out, prefix + ".reduce");
    mha->attention.collect(out, prefix + ".attention");
    mha->attention_norm.collect(out, prefix + ".attention_norm");
    mha->feed_forward.collect(out, prefix + ".feed_forward");
    mha->feed_forward_norm.collect(out, prefix + ".feed_forward_norm");
  }
}

AdaptedSequence apply_adapter(const EmbeddingSequence& z, const AdapterParams& params) {
  if (!z.values.defined() || z.values.rank() != 2) throw std::invalid_argument("adapter input must be a T' x F' matrix");
  return AdaptedSequence{params.forward(z.values)};
}

}  // namespace aac
