#include "aac/model/types.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace aac {

namespace {

template <typename Enum, std::size_t N>
Enum parse_named(std::string_view name, const std::array<std::pair<Enum, std::string_view>, N>& table,
                 std::string_view what) {
  for (const auto& [value, label] : table)
    if (label == name) return value;
  std::string options;
  for (const auto& [value, label] : table) {
    if (!options.empty()) options += ", ";
    options += label;
  }
  throw std::invalid_argument(fmt::format("unknown {} '{}' (expected one of: {})", what, name, options));
}

template <typename Enum, std::size_t N>
std::string_view name_of(Enum value, const std::array<std::pair<Enum, std::string_view>, N>& table) {
  for (const auto& [v, label] : table)
    if (v == value) return label;
  throw std::logic_error("unnamed enum value");
}

constexpr std::array<std::pair<EncoderId, std::string_view>, 5> kEncoders{{
    {EncoderId::vggish, "vggish"},
    {EncoderId::yamnet, "yamnet"},
    {EncoderId::openl3, "openl3"},
    {EncoderId::coala, "coala"},
    {EncoderId::mock, "mock"},
}};
constexpr std::array<std::pair<Overlap, std::string_view>, 2> kOverlaps{{
    {Overlap::none, "none"},
    {Overlap::half, "half"},
}};
constexpr std::array<std::pair<AdapterKind, std::string_view>, 3> kAdapters{{
    {AdapterKind::identity, "identity"},
    {AdapterKind::mlp, "mlp"},
    {AdapterKind::mha, "mha"},
}};
constexpr std::array<std::pair<WordSource, std::string_view>, 7> kSources{{
    {WordSource::random, "random"},
    {WordSource::scratch, "scratch"},
    {WordSource::w2v, "w2v"},
    {WordSource::glove, "glove"},
    {WordSource::fasttext, "fasttext"},
    {WordSource::bert_static, "bert_static"},
    {WordSource::cbow_clotho, "cbow_clotho"},
}};

}  // namespace

std::string_view to_string(EncoderId id) { return name_of(id, kEncoders); }
std::string_view to_string(Overlap overlap) { return name_of(overlap, kOverlaps); }
std::string_view to_string(AdapterKind kind) { return name_of(kind, kAdapters); }
std::string_view to_string(WordSource source) { return name_of(source, kSources); }

EncoderId parse_encoder_id(std::string_view name) { return parse_named(name, kEncoders, "encoder"); }
Overlap parse_overlap(std::string_view name) { return parse_named(name, kOverlaps, "overlap"); }
AdapterKind parse_adapter_kind(std::string_view name) { return parse_named(name, kAdapters, "adapter"); }
WordSource parse_word_source(std::string_view name) { return parse_named(name, kSources, "word source"); }

std::optional<std::size_t> encoder_dimension(EncoderId id) {
  switch (id) {
    case EncoderId::vggish: return 128;
    case EncoderId::yamnet: return 1024;
    case EncoderId::openl3: return 512;
    case EncoderId::coala: return 1152;
    case EncoderId::mock: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<std::size_t> word_source_dimension(WordSource source) {
  switch (source) {
    case WordSource::w2v:
    case WordSource::glove:
    case WordSource::fasttext:
    case WordSource::cbow_clotho: return 300;
    case WordSource::bert_static: return 768;
    case WordSource::random:
    case WordSource::scratch: return std::nullopt;
  }
  return std::nullopt;
}

void EmbeddingSequence::validate() const {
  if (!values.defined() || values.rank() != 2) throw std::invalid_argument("embedding sequence must be a T' x F' matrix");
  if (auto dim = encoder_dimension(encoder); dim && *dim != features()) {
    throw std::invalid_argument(fmt::format("encoder {} produces {}-dimensional embeddings, got F'={}",
                                            to_string(encoder), *dim, features()));
  }
  if (!(window_seconds > 0.0) || !(hop_seconds > 0.0)) {
    throw std::invalid_argument("window and hop durations must be positive");
  }
  const double tol = 1e-6 * window_seconds;
  if (overlap == Overlap::none) {
    if (std::abs(hop_seconds - window_seconds) > tol) {
      throw std::invalid_argument(fmt::format("overlap none needs hop == window, got hop {} window {}", hop_seconds, window_seconds));
    }
  } else if (encoder == EncoderId::mock) {
    // Mock framing floors odd window lengths, so the hop may fall short of half a window.
    if (hop_seconds > window_seconds / 2 + tol) {
      throw std::invalid_argument(fmt::format("overlap half needs hop <= window/2, got hop {} window {}", hop_seconds, window_seconds));
    }
  } else if (std::abs(hop_seconds - window_seconds / 2) > tol) {
    throw std::invalid_argument(fmt::format("overlap half needs hop == window/2, got hop {} window {}", hop_seconds, window_seconds));
  }
}

}  // namespace aac
