#include "aac/data/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

#include "aac/data/dataset.hpp"

namespace aac {

std::vector<std::string> tokenize_caption(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (c < 0x80 && std::ispunct(c)) {
      continue;
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  if (tokens.empty()) throw std::invalid_argument(fmt::format("caption '{}' has no tokens", text));
  return tokens;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Vocabulary Vocabulary::build(const CaptionDataset& train, std::size_t min_count) {
  if (train.clips.empty()) throw std::invalid_argument("cannot build a vocabulary from an empty dataset");
  std::map<std::string, std::size_t> counts;
  for (const auto& clip : train.clips)
    for (const auto& caption : clip.captions)
      for (auto& token : tokenize_caption(caption)) ++counts[std::move(token)];

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> tokens{std::string(kPadToken), std::string(kEndToken), std::string(kUnknownToken)};
  for (auto& [token, count] : ranked)
    if (count >= min_count) tokens.push_back(token);
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.size() < 3 || tokens[kPad] != kPadToken || tokens[kEnd] != kEndToken || tokens[kUnknown] != kUnknownToken) {
    throw std::invalid_argument("vocabulary must start with the reserved pad, end and unknown tokens");
  }
  Vocabulary v;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!v.index_.emplace(tokens[i], i).second) {
      throw std::invalid_argument(fmt::format("duplicate vocabulary token '{}'", tokens[i]));
    }
  }
  v.tokens_ = std::move(tokens);
  return v;
}

const std::string& Vocabulary::token(std::size_t index) const {
  if (index >= tokens_.size()) throw std::out_of_range(fmt::format("token index {} outside vocabulary of {}", index, size()));
  return tokens_[index];
}

bool Vocabulary::contains(std::string_view token) const { return index_.contains(std::string(token)); }

std::size_t Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnknown : it->second;
}

std::vector<std::size_t> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(index_of(t));
  return out;
}

std::vector<std::string> Vocabulary::decode(std::span<const std::size_t> indices) const {
  std::vector<std::string> out;
  for (std::size_t i : indices) {
    if (i == kEnd) break;
    if (i == kPad) continue;
    out.push_back(token(i));
  }
  return out;
}

}  // namespace aac
