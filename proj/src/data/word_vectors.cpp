#include "aac/data/word_vectors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace aac {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<double> random_row(std::uint64_t seed, std::size_t index, std::size_t dim) {
  Rng rng = Rng(seed).fork(index);
  const double bound = std::sqrt(3.0 / static_cast<double>(dim));
  std::vector<double> row(dim);
  for (double& v : row) v = rng.uniform(-bound, bound);
  return row;
}

}  // namespace

WordEmbeddingTable random_word_table(const Vocabulary& vocab, std::size_t dim, WordSource source, bool trainable,
                                     std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("word embedding dimension must be positive");
  std::vector<double> values;
  values.reserve(vocab.size() * dim);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto row = random_row(seed, i, dim);
    values.insert(values.end(), row.begin(), row.end());
  }
  return WordEmbeddingTable::create(Tensor::from({vocab.size(), dim}, std::move(values)), source, trainable);
}

WordEmbeddingTable load_word_embedding_table(const std::filesystem::path& path, const Vocabulary& vocab,
                                             WordSource source, bool trainable, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open word vectors {}", path.string()));
  const auto fail = [&](std::size_t line, const std::string& what) {
    return std::runtime_error(fmt::format("{}:{}: {}", path.string(), line, what));
  };

  std::optional<std::size_t> dim;
  std::vector<std::optional<std::vector<double>>> found(vocab.size());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) {
      const auto count = parse_number<std::size_t>(fields[0]);
      const auto d = parse_number<std::size_t>(fields[1]);
      if (count && d) {
        if (*d == 0) throw fail(line_no, "header declares zero dimensions");
        dim = *d;
        continue;
      }
    }
    if (fields.size() < 2) throw fail(line_no, "expected a token followed by vector components");
    const std::size_t row_dim = fields.size() - 1;
    if (!dim) dim = row_dim;
    if (row_dim != *dim) throw fail(line_no, fmt::format("row has {} components, expected {}", row_dim, *dim));

    const std::size_t index = vocab.index_of(fields[0]);
    const bool wanted = index != Vocabulary::kUnknown || fields[0] == Vocabulary::kUnknownToken;
    std::vector<double> row(row_dim);
    for (std::size_t j = 0; j < row_dim; ++j) {
      const auto v = parse_number<double>(fields[j + 1]);
      if (!v || !std::isfinite(*v)) throw fail(line_no, fmt::format("component {} '{}' is not a finite number", j + 1, fields[j + 1]));
      row[j] = *v;
    }
    if (wanted && !found[index]) found[index] = std::move(row);
  }
  if (!dim) throw std::runtime_error(fmt::format("{}: no word vectors found", path.string()));
  if (auto expected = word_source_dimension(source); expected && *expected != *dim) {
    throw std::runtime_error(fmt::format("{}: {} vectors must have {} dimensions, file has {}", path.string(),
                                         to_string(source), *expected, *dim));
  }

  std::vector<double> values;
  values.reserve(vocab.size() * *dim);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto row = found[i] ? *found[i] : random_row(seed, i, *dim);
    values.insert(values.end(), row.begin(), row.end());
  }
  return WordEmbeddingTable::create(Tensor::from({vocab.size(), *dim}, std::move(values)), source, trainable);
}

std::string format_word_vectors(std::span<const std::string> tokens, const Tensor& rows, bool with_header) {
  if (rows.rows() != tokens.size()) throw std::invalid_argument("one vector row per token is required");
  std::string out;
  if (with_header) out += fmt::format("{} {}\n", tokens.size(), rows.cols());
  const auto d = rows.data();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out += tokens[i];
    for (std::size_t j = 0; j < rows.cols(); ++j) out += fmt::format(" {}", d[i * rows.cols() + j]);
    out.push_back('\n');
  }
  return out;
}

}  // namespace aac
