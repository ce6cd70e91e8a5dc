#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "aac/numerics/tensor.hpp"

namespace aac {

enum class EncoderId : std::uint8_t { vggish = 0, yamnet = 1, openl3 = 2, coala = 3, mock = 4 };
enum class Overlap : std::uint8_t { none = 0, half = 1 };
enum class AdapterKind { identity, mlp, mha };
enum class WordSource { random, scratch, w2v, glove, fasttext, bert_static, cbow_clotho };

std::string_view to_string(EncoderId id);
std::string_view to_string(Overlap overlap);
std::string_view to_string(AdapterKind kind);
std::string_view to_string(WordSource source);

// Parsers throw std::invalid_argument on unknown names.
EncoderId parse_encoder_id(std::string_view name);
Overlap parse_overlap(std::string_view name);
AdapterKind parse_adapter_kind(std::string_view name);
WordSource parse_word_source(std::string_view name);

/// Declared embedding dimensionality of a named encoder; nullopt for mock.
std::optional<std::size_t> encoder_dimension(EncoderId id);

/// Required word-vector dimensionality of a pre-trained source; nullopt when
/// the source (random, scratch) has a free dimension.
std::optional<std::size_t> word_source_dimension(WordSource source);

/// Audio embedding sequence Z (T' x F') with extraction metadata.
struct EmbeddingSequence {
  Tensor values;
  EncoderId encoder = EncoderId::mock;
  Overlap overlap = Overlap::none;
  double window_seconds = 1.0;
  double hop_seconds = 1.0;

  std::size_t length() const { return values.rows(); }
  std::size_t features() const { return values.cols(); }

  /// Checks T' >= 1, the named encoder's dimensionality, and the hop/overlap
  /// relation. Throws std::invalid_argument.
  void validate() const;
};

/// Adapter output Z' (T' x F'').
struct AdaptedSequence {
  Tensor values;
};

}  // namespace aac
