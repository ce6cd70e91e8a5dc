#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aac/model/adapter.hpp"
#include "aac/model/decoder.hpp"

namespace aac {

/// Adapter A, decoder D and the word embedding table S' of one captioner.
class CaptionModel {
 public:
  /// Seeded initialization of adapter and decoder; the table is taken as given.
  static CaptionModel create(const AdapterConfig& adapter, const DecoderConfig& decoder, WordEmbeddingTable table,
                             std::uint64_t seed);

  const AdapterParams& adapter() const { return adapter_; }
  const DecoderParams& decoder() const { return decoder_; }
  const WordEmbeddingTable& table() const { return table_; }

  /// Every tensor in declaration order: adapter, decoder, word table.
  ParamList parameters() const;
  /// Tensors the optimizer updates (frozen word tables excluded).
  std::vector<Tensor> trainable_parameters() const;

  AdaptedSequence adapt(const Tensor& z) const;
  /// Teacher-forced logits for the prefix `tokens`: (tokens.size() + 1) x W.
  Tensor logits(const AdaptedSequence& memory, std::span<const std::size_t> tokens) const;
  /// Mean token cross-entropy of predicting `caption` followed by `end_token`.
  Tensor caption_loss(const Tensor& z, std::span<const std::size_t> caption, std::size_t end_token) const;
  std::vector<std::size_t> greedy_decode(const Tensor& z, std::size_t end_token) const;

  /// Independent deep copy.
  CaptionModel clone() const;
  /// Overwrites parameter values from a structurally identical model.
  void load_values(const CaptionModel& other);

 private:
  AdapterParams adapter_;
  DecoderParams decoder_;
  WordEmbeddingTable table_;
};

}  // namespace aac
