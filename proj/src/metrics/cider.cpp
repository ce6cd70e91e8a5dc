#include "aac/metrics/cider.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace aac {

namespace {

// ngram -> term frequency, one map per order n (index n - 1).
using NgramCounts = std::vector<std::map<std::string, std::size_t>>;

NgramCounts count_ngrams(const TokenSequence& tokens, std::size_t max_n) {
  NgramCounts counts(max_n);
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (tokens.size() < n) break;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
      ++counts[n - 1][ngram_key(std::span<const std::string>(tokens).subspan(i, n))];
  }
  return counts;
}

struct TfIdfVector {
  std::vector<std::map<std::string, double>> weights;
  std::vector<double> norms;
  double length = 0.0;
};

TfIdfVector to_tfidf(const TokenSequence& tokens, const NgramDocumentFrequency& df) {
  const auto counts = count_ngrams(tokens, df.max_n());
  const double log_docs = std::log(static_cast<double>(std::max<std::size_t>(df.documents(), 1)));
  TfIdfVector v{std::vector<std::map<std::string, double>>(df.max_n()), std::vector<double>(df.max_n(), 0.0),
                static_cast<double>(tokens.size())};
  for (std::size_t n = 0; n < df.max_n(); ++n) {
    for (const auto& [key, tf] : counts[n]) {
      const double idf = log_docs - std::log(static_cast<double>(std::max<std::size_t>(df.frequency(key), 1)));
      const double w = static_cast<double>(tf) * idf;
      v.weights[n][key] = w;
      v.norms[n] += w * w;
    }
    v.norms[n] = std::sqrt(v.norms[n]);
  }
  return v;
}

double similarity(const TfIdfVector& hyp, const TfIdfVector& ref, double sigma) {
  const double penalty = cider_length_penalty(hyp.length - ref.length, sigma);
  double total = 0.0;
  for (std::size_t n = 0; n < hyp.weights.size(); ++n) {
    double dot = 0.0;
    for (const auto& [key, w] : hyp.weights[n]) {
      const auto it = ref.weights[n].find(key);
      if (it == ref.weights[n].end()) continue;
      dot += std::min(w, it->second) * it->second;
    }
    // Rounding can push a perfect match a few ulps above 1.
    if (hyp.norms[n] != 0.0 && ref.norms[n] != 0.0) dot = std::min(1.0, dot / (hyp.norms[n] * ref.norms[n]));
    total += dot * penalty;
  }
  return total / static_cast<double>(hyp.weights.size());
}

}  // namespace

std::string ngram_key(std::span<const std::string> tokens) {
  std::string key;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) key.push_back('\x1f');
    key += tokens[i];
  }
  return key;
}

NgramDocumentFrequency NgramDocumentFrequency::build(std::span<const std::vector<TokenSequence>> references_per_clip,
                                                     std::size_t max_n) {
  if (max_n == 0) throw std::invalid_argument("max_n must be positive");
  NgramDocumentFrequency df;
  df.max_n_ = max_n;
  df.documents_ = references_per_clip.size();
  for (const auto& refs : references_per_clip) {
    std::set<std::string> seen;
    for (const auto& ref : refs)
      for (const auto& by_n : count_ngrams(ref, max_n))
        for (const auto& [key, tf] : by_n) seen.insert(key);
    for (const auto& key : seen) ++df.counts_[key];
  }
  return df;
}

std::size_t NgramDocumentFrequency::frequency(const std::string& ngram_key) const {
  const auto it = counts_.find(ngram_key);
  return it == counts_.end() ? 0 : it->second;
}

double cider_length_penalty(double length_difference, double sigma) {
  return std::exp(-(length_difference * length_difference) / (2.0 * sigma * sigma));
}

double cider_d(const TokenSequence& candidate, std::span<const TokenSequence> references,
               const NgramDocumentFrequency& df, const CiderOptions& options) {
  if (references.empty()) throw std::invalid_argument("CIDEr-D needs at least one reference");
  if (candidate.empty()) return 0.0;
  const TfIdfVector hyp = to_tfidf(candidate, df);
  std::vector<double> per_reference;
  per_reference.reserve(references.size());
  for (const auto& ref : references) per_reference.push_back(similarity(hyp, to_tfidf(ref, df), options.sigma));
  // Summing in sorted order makes the mean independent of reference order.
  std::sort(per_reference.begin(), per_reference.end());
  double total = 0.0;
  for (double s : per_reference) total += s;
  return options.scale * total / static_cast<double>(references.size());
}

std::vector<double> corpus_cider_d(std::span<const TokenSequence> candidates,
                                   std::span<const std::vector<TokenSequence>> references_per_clip,
                                   const CiderOptions& options) {
  if (candidates.size() != references_per_clip.size()) {
    throw std::invalid_argument(fmt::format("{} candidates for {} reference sets", candidates.size(), references_per_clip.size()));
  }
  const auto df = NgramDocumentFrequency::build(references_per_clip);
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) scores.push_back(cider_d(candidates[i], references_per_clip[i], df, options));
  return scores;
}

}  // namespace aac
