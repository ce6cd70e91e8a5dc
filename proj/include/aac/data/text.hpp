#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aac {

/// Lowercases ASCII letters, removes ASCII punctuation, splits on whitespace.
/// Throws std::invalid_argument when nothing is left.
std::vector<std::string> tokenize_caption(std::string_view text);

std::string join_tokens(std::span<const std::string> tokens);

struct CaptionDataset;

/// Token strings and their indices. pad, end and unknown occupy the fixed
/// indices 0, 1 and 2; corpus tokens follow by descending count, ties broken
/// lexicographically.
class Vocabulary {
 public:
  static constexpr std::size_t kPad = 0;
  static constexpr std::size_t kEnd = 1;
  static constexpr std::size_t kUnknown = 2;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kEndToken = "<eos>";
  static constexpr std::string_view kUnknownToken = "<unk>";

  /// Builds from training captions only; tokens seen fewer than `min_count`
  /// times are left out. Throws on an empty dataset.
  static Vocabulary build(const CaptionDataset& train, std::size_t min_count = 1);
  /// Restores an exact token list (reserved tokens first), e.g. from a checkpoint.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(std::size_t index) const;
  bool contains(std::string_view token) const;
  /// Unknown words map to kUnknown.
  std::size_t index_of(std::string_view token) const;

  std::vector<std::size_t> encode(std::span<const std::string> tokens) const;
  /// Stops at the first end token; pad tokens are skipped.
  std::vector<std::string> decode(std::span<const std::size_t> indices) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace aac
