#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace aac {

using TokenSequence = std::vector<std::string>;

/// Number of documents (clips) whose reference set contains each n-gram,
/// n = 1..max_n. A document is the union of one clip's references.
class NgramDocumentFrequency {
 public:
  static NgramDocumentFrequency build(std::span<const std::vector<TokenSequence>> references_per_clip,
                                      std::size_t max_n = 4);

  std::size_t documents() const { return documents_; }
  std::size_t max_n() const { return max_n_; }
  /// 0 for n-grams never seen.
  std::size_t frequency(const std::string& ngram_key) const;

 private:
  std::map<std::string, std::size_t> counts_;
  std::size_t documents_ = 0;
  std::size_t max_n_ = 4;
};

struct CiderOptions {
  double sigma = 6.0;   // length-penalty width
  double scale = 10.0;
};

/// Map key of an n-gram.
std::string ngram_key(std::span<const std::string> tokens);

/// Gaussian length penalty exp(-delta^2 / (2 sigma^2)).
double cider_length_penalty(double length_difference, double sigma);

/// CIDEr-D of one candidate against its references: TF-IDF n-gram vectors
/// (idf = ln(N) - ln(max(1, df))), candidate weights clipped by the
/// reference's, cosine per n with the length penalty, averaged over n and
/// references, times 10. An empty candidate scores 0; an empty reference
/// list throws.
double cider_d(const TokenSequence& candidate, std::span<const TokenSequence> references,
               const NgramDocumentFrequency& df, const CiderOptions& options = {});

/// Per-clip CIDEr-D with document frequencies taken from these references.
std::vector<double> corpus_cider_d(std::span<const TokenSequence> candidates,
                                   std::span<const std::vector<TokenSequence>> references_per_clip,
                                   const CiderOptions& options = {});

}  // namespace aac
