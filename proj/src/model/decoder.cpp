#include "aac/model/decoder.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "aac/numerics/ops.hpp"

namespace aac {

WordEmbeddingTable WordEmbeddingTable::create(Tensor rows, WordSource source, bool trainable) {
  if (!rows.defined() || rows.rank() != 2) throw std::invalid_argument("word embedding table must be a W x W' matrix");
  if (auto dim = word_source_dimension(source); dim && *dim != rows.cols()) {
    throw std::invalid_argument(
        fmt::format("{} word vectors are {}-dimensional, got {}", to_string(source), *dim, rows.cols()));
  }
  if (source == WordSource::bert_static && trainable) {
    throw std::invalid_argument("bert_static word embeddings cannot be fine-tuned");
  }
  Tensor table = rows.detach();
  table.set_requires_grad(trainable);
  return WordEmbeddingTable{std::move(table), source, trainable};
}

Tensor embed_tokens(std::span<const std::size_t> tokens, const WordEmbeddingTable& table) {
  const Tensor start = Tensor::zeros({1, table.dim()});
  if (tokens.empty()) return start;
  for (std::size_t t : tokens) {
    if (t >= table.vocab_size()) {
      throw std::out_of_range(fmt::format("token index {} outside vocabulary of {}", t, table.vocab_size()));
    }
  }
  const Tensor parts[] = {start, gather_rows(table.rows, tokens)};
  return concat_rows(parts);
}

DecoderParams DecoderParams::init(const DecoderConfig& config, std::size_t memory_dim, Rng& rng) {
  config.validate();
  if (memory_dim == 0) throw std::invalid_argument("decoder memory dimension must be positive");
  DecoderParams p;
  p.config = config;
  p.memory_dim = memory_dim;
  const std::size_t width = config.model_width;
  if (config.word_dim != width) p.input_projection = Linear::init(config.word_dim, width, rng);
  for (std::size_t b = 0; b < config.num_blocks; ++b) {
    DecoderBlock block;
    block.self_attention = AttentionParams::init(width, width, rng);
    block.self_norm = LayerNormParams::init(width, config.layer_norm_eps);
    block.cross_attention = AttentionParams::init(width, memory_dim, rng);
    block.cross_norm = LayerNormParams::init(width, config.layer_norm_eps);
    if (config.feed_forward == FeedForwardKind::linear) {
      block.feed_forward = Linear::init(width, width, rng);
    } else {
      block.feed_forward = Linear::init(width, config.ff_hidden, rng);
      block.feed_forward_out = Linear::init(config.ff_hidden, width, rng);
    }
    block.feed_forward_norm = LayerNormParams::init(width, config.layer_norm_eps);
    p.blocks.push_back(std::move(block));
  }
  p.output = Linear::init(width, config.vocab_size, rng);
  return p;
}

void DecoderParams::collect(ParamList& out, const std::string& prefix) const {
  if (input_projection) input_projection->collect(out, prefix + ".input_projection");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    const std::string name = fmt::format("{}.block{}", prefix, b);
    block.self_attention.collect(out, name + ".self_attention");
    block.self_norm.collect(out, name + ".self_norm");
    block.cross_attention.collect(out, name + ".cross_attention");
    block.cross_norm.collect(out, name + ".cross_norm");
    block.feed_forward.collect(out, name + ".feed_forward");
    if (block.feed_forward_out) block.feed_forward_out->collect(out, name + ".feed_forward_out");
    block.feed_forward_norm.collect(out, name + ".feed_forward_norm");
  }
  output.collect(out, prefix + ".output");
}

Tensor decoder_forward(const AdaptedSequence& memory, const Tensor& input_embeddings, const DecoderParams& params) {
  const auto& cfg = params.config;
  const std::size_t k = input_embeddings.rows();
  if (k > cfg.max_caption_len) {
    throw std::invalid_argument(fmt::format("decoder input of {} positions exceeds max_caption_len {}", k, cfg.max_caption_len));
  }
  if (input_embeddings.cols() != cfg.word_dim) {
    throw std::invalid_argument(fmt::format("decoder expects {}-dimensional word embeddings, got {}", cfg.word_dim, input_embeddings.cols()));
  }
  if (memory.values.cols() != params.memory_dim) {
    throw std::invalid_argument(
        fmt::format("decoder expects {}-dimensional audio memory, got {}", params.memory_dim, memory.values.cols()));
  }

  Tensor x = params.input_projection ? params.input_projection->forward(input_embeddings) : input_embeddings;
  x = add(x, positional_encoding(k, cfg.model_width));
  const AttentionMask causal = AttentionMask::causal(k);
  for (const auto& block : params.blocks) {
    x = block.self_norm.forward(add(x, multi_head_attention(block.self_attention, x, x, cfg.heads, &causal)));
    x = block.cross_norm.forward(add(x, multi_head_attention(block.cross_attention, x, memory.values, cfg.heads)));
    Tensor ff = block.feed_forward.forward(x);
    if (block.feed_forward_out) ff = block.feed_forward_out->forward(relu(ff));
    x = block.feed_forward_norm.forward(add(x, ff));
  }
  return params.output.forward(x);
}

std::vector<std::size_t> greedy_decode(const AdaptedSequence& memory, const WordEmbeddingTable& table,
                                       const DecoderParams& params, std::size_t end_token) {
  if (end_token >= params.config.vocab_size) {
    throw std::invalid_argument(fmt::format("end token {} outside vocabulary of {}", end_token, params.config.vocab_size));
  }
  NoGradGuard no_grad;
  std::vector<std::size_t> emitted;
  while (emitted.size() < params.config.max_caption_len) {
    const Tensor logits = decoder_forward(memory, embed_tokens(emitted, table), params);
    const std::size_t w = logits.cols();
    const auto last = logits.data().subspan((logits.rows() - 1) * w, w);
    std::size_t best = 0;
    for (std::size_t j = 1; j < w; ++j)
      if (last[j] > last[best]) best = j;
    emitted.push_back(best);
    if (best == end_token) break;
  }
  return emitted;
}

}  // namespace aac
