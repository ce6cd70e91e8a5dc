#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aac/model/config.hpp"
#include "aac/model/layers.hpp"
#include "aac/model/types.hpp"

namespace aac {

/// One row per vocabulary token, in vocabulary index order. A trainable table
/// participates in backward; a frozen one never receives gradient.
struct WordEmbeddingTable {
  Tensor rows;  // W x W'
  WordSource source = WordSource::random;
  bool trainable = false;

  static WordEmbeddingTable create(Tensor rows, WordSource source, bool trainable);
  std::size_t vocab_size() const { return rows.rows(); }
  std::size_t dim() const { return rows.cols(); }
};

/// (len + 1) x W' decoder input: row 0 is the zero start vector, row i + 1 is
/// the table row of tokens[i].
Tensor embed_tokens(std::span<const std::size_t> tokens, const WordEmbeddingTable& table);

struct DecoderBlock {
  AttentionParams self_attention;
  LayerNormParams self_norm;
  AttentionParams cross_attention;
  LayerNormParams cross_norm;
  Linear feed_forward;
  std::optional<Linear> feed_forward_out;  // standard FFN only
  LayerNormParams feed_forward_norm;
};

struct DecoderParams {
  DecoderConfig config;
  std::size_t memory_dim = 0;  // F'' of the adapted audio sequence
  std::optional<Linear> input_projection;  // present iff word_dim != model_width
  std::vector<DecoderBlock> blocks;
  Linear output;

  static DecoderParams init(const DecoderConfig& config, std::size_t memory_dim, Rng& rng);
  void collect(ParamList& out, const std::string& prefix) const;
};

/// K x W logits; row k depends only on input rows <= k and on the memory.
Tensor decoder_forward(const AdaptedSequence& memory, const Tensor& input_embeddings, const DecoderParams& params);

/// Feeds the zero start vector, then the embeddings of its own argmax tokens,
/// until `end_token` is emitted or max_caption_len tokens exist. The result
/// includes the end token when it was produced.
std::vector<std::size_t> greedy_decode(const AdaptedSequence& memory, const WordEmbeddingTable& table,
                                       const DecoderParams& params, std::size_t end_token);

}  // namespace aac
