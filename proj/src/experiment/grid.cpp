#include "aac/experiment/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

namespace aac {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string canonical_key(const std::string& key) {
  if (key == "encoder" || key == "encoder_id") return "encoder";
  if (key == "overlap") return "overlap";
  if (key == "adapter") return "adapter";
  if (key == "word_source" || key == "words" || key == "source") return "word_source";
  if (key == "fine_tune" || key == "ft") return "fine_tune";
  throw std::invalid_argument(
      fmt::format("unknown grid filter key '{}' (expected encoder, overlap, adapter, word_source or fine_tune)", key));
}

std::string canonical_value(const std::string& key, const std::string& value) {
  if (key == "encoder") return std::string(to_string(parse_encoder_id(value)));
  if (key == "overlap") return std::string(to_string(parse_overlap(value)));
  if (key == "adapter") return std::string(to_string(parse_adapter_kind(value)));
  if (key == "word_source") return std::string(to_string(parse_word_source(value)));
  if (value == "true" || value == "ft" || value == "1") return "true";
  if (value == "false" || value == "fixed" || value == "0") return "false";
  throw std::invalid_argument(fmt::format("fine_tune filter value '{}' must be true or false", value));
}

}  // namespace

GridFilter GridFilter::parse(std::string_view expression) {
  GridFilter filter;
  if (trim(expression).empty()) return filter;
  for (const auto& clause : split(expression, ',')) {
    const auto eq = clause.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(fmt::format("grid filter clause '{}' lacks '='", clause));
    const std::string key = canonical_key(trim(std::string_view(clause).substr(0, eq)));
    auto& values = filter.allowed[key];
    for (const auto& v : split(std::string_view(clause).substr(eq + 1), '|')) {
      if (v.empty()) throw std::invalid_argument(fmt::format("grid filter clause '{}' has an empty value", clause));
      values.push_back(canonical_value(key, v));
    }
  }
  return filter;
}

bool GridFilter::accepts(const ExperimentConfig& c) const {
  const auto check = [&](const char* key, std::string_view value) {
    const auto it = allowed.find(key);
    return it == allowed.end() || std::find(it->second.begin(), it->second.end(), value) != it->second.end();
  };
  return check("encoder", to_string(c.encoder_id)) && check("overlap", to_string(c.overlap)) &&
         check("adapter", to_string(c.adapter.kind)) && check("word_source", to_string(c.word_source)) &&
         check("fine_tune", c.fine_tune ? "true" : "false");
}

std::vector<WordSource> grid_word_sources() {
  return {WordSource::w2v, WordSource::glove, WordSource::fasttext, WordSource::cbow_clotho, WordSource::random};
}

std::vector<ExperimentConfig> enumerate_grid(const ExperimentConfig& defaults, const GridFilter& filter) {
  const EncoderId encoders[] = {EncoderId::vggish, EncoderId::yamnet, EncoderId::openl3, EncoderId::coala};
  const Overlap overlaps[] = {Overlap::none, Overlap::half};
  const AdapterKind adapters[] = {AdapterKind::identity, AdapterKind::mlp, AdapterKind::mha};
  std::vector<std::pair<WordSource, bool>> words;
  for (WordSource s : grid_word_sources()) {
    words.emplace_back(s, false);
    words.emplace_back(s, true);
  }
  words.emplace_back(WordSource::bert_static, false);

  std::vector<ExperimentConfig> out;
  for (EncoderId e : encoders)
    for (Overlap o : overlaps)
      for (AdapterKind a : adapters)
        for (const auto& [source, ft] : words) {
          ExperimentConfig c = defaults;
          c.encoder_id = e;
          c.overlap = o;
          c.adapter.kind = a;
          c.word_source = source;
          c.fine_tune = ft;
          if (filter.accepts(c)) out.push_back(std::move(c));
        }
  return out;
}

}  // namespace aac
