#include "oracles.hpp"

#include <cmath>
#include <map>
#include <set>

namespace aac::testing {

BruteWilcoxon wilcoxon_brute_force(const std::vector<double>& diffs) {
  std::vector<double> d;
  for (double x : diffs)
    if (x != 0.0) d.push_back(x);
  const std::size_t n = d.size();
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t below = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::fabs(d[j]) < std::fabs(d[i])) ++below;
      if (std::fabs(d[j]) == std::fabs(d[i])) ++equal;
    }
    rank[i] = static_cast<double>(below) + (static_cast<double>(equal) + 1.0) / 2.0;
  }
  double observed = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (d[i] > 0) observed += rank[i];
  std::size_t at_least = 0;
  const std::size_t patterns = std::size_t{1} << n;
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    double w = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (std::size_t{1} << i)) w += rank[i];
    if (w >= observed - 1e-9) ++at_least;
  }
  return {observed, static_cast<double>(at_least) / static_cast<double>(patterns), n};
}

std::size_t enumerate_window_starts(std::size_t frames, std::size_t window, std::size_t hop) {
  std::size_t count = 0;
  for (std::size_t start = 0; start + window <= frames; start += hop) ++count;
  return count;
}

namespace {

using Counts = std::map<Tokens, double>;

Counts ngrams(const Tokens& t, std::size_t n) {
  Counts c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) c[Tokens(t.begin() + static_cast<long>(i), t.begin() + static_cast<long>(i + n))] += 1.0;
  return c;
}

}  // namespace

std::vector<double> cider_d_oracle(const std::vector<Tokens>& candidates,
                                   const std::vector<std::vector<Tokens>>& references) {
  const double num_docs = static_cast<double>(references.size());
  std::map<Tokens, double> df;
  for (const auto& refs : references) {
    std::set<Tokens> seen;
    for (const auto& r : refs)
      for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& [g, c] : ngrams(r, n)) seen.insert(g);
    for (const auto& g : seen) df[g] += 1.0;
  }
  const auto weights = [&](const Tokens& t, std::size_t n) {
    Counts w = ngrams(t, n);
    for (auto& [g, c] : w) {
      const auto it = df.find(g);
      const double f = it == df.end() ? 1.0 : std::max(1.0, it->second);
      c *= std::log(num_docs) - std::log(f);
    }
    return w;
  };
  const auto norm = [](const Counts& w) {
    double s = 0.0;
    for (const auto& [g, c] : w) s += c * c;
    return std::sqrt(s);
  };

  std::vector<double> scores;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Tokens& cand = candidates[i];
    if (cand.empty()) {
      scores.push_back(0.0);
      continue;
    }
    double total = 0.0;
    for (const auto& ref : references[i]) {
      const double delta = static_cast<double>(cand.size()) - static_cast<double>(ref.size());
      double per_n = 0.0;
      for (std::size_t n = 1; n <= 4; ++n) {
        const Counts wc = weights(cand, n);
        const Counts wr = weights(ref, n);
        double dot = 0.0;
        for (const auto& [g, c] : wc) {
          const auto it = wr.find(g);
          if (it != wr.end()) dot += std::min(c, it->second) * it->second;
        }
        const double nc = norm(wc), nr = norm(wr);
        double cosine = (nc != 0.0 && nr != 0.0) ? dot / (nc * nr) : 0.0;
        cosine = std::min(cosine, 1.0);
        per_n += cosine * std::exp(-delta * delta / (2.0 * 36.0));
      }
      total += per_n / 4.0;
    }
    scores.push_back(10.0 * total / static_cast<double>(references[i].size()));
  }
  return scores;
}

}  // namespace aac::testing
