#include "aac/metrics/summary.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

#include "aac/io/csv.hpp"

namespace aac {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ScoreReport ScoreReport::from_scores(std::string setting_id, std::uint64_t seed, std::vector<std::string> clip_ids,
                                     std::vector<double> per_example) {
  if (clip_ids.size() != per_example.size()) throw std::invalid_argument("one score per clip is required");
  ScoreReport r{std::move(setting_id), seed, std::move(clip_ids), std::move(per_example), 0.0, std::nullopt, std::nullopt};
  double total = 0.0;
  for (double s : r.per_example) total += s;
  r.corpus_cider_d = r.per_example.empty() ? 0.0 : total / static_cast<double>(r.per_example.size());
  return r;
}

ScoreSummary summarize(const std::string& setting_id, std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument(fmt::format("setting {} has no runs", setting_id));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  ScoreSummary s;
  s.setting_id = setting_id;
  s.n = sorted.size();
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  } else {
    s.degenerate = true;
  }
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  return s;
}

std::vector<ScoreSummary> summarize_scores(std::span<const RunScore> runs) {
  std::map<std::string, std::vector<std::pair<std::uint64_t, double>>> groups;
  for (const auto& r : runs) groups[r.setting_id].emplace_back(r.seed, r.cider_d);
  std::vector<ScoreSummary> out;
  for (auto& [id, scores] : groups) {
    // Seed order fixes the summation order of the mean.
    std::sort(scores.begin(), scores.end());
    std::vector<double> values;
    for (const auto& [seed, v] : scores) values.push_back(v);
    out.push_back(summarize(id, values));
  }
  return out;
}

std::string format_run_csv(std::span<const RunScore> runs) {
  std::string out = "setting_id,seed,cider_d\n";
  for (const auto& r : runs) out += fmt::format("{},{},{}\n", csv::quote_if_needed(r.setting_id), r.seed, r.cider_d);
  return out;
}

std::vector<RunScore> parse_run_csv(const std::string& text) {
  const auto rows = csv::parse(text);
  if (rows.empty() || rows.front() != csv::Row{"setting_id", "seed", "cider_d"}) {
    throw std::runtime_error("run CSV must start with the header setting_id,seed,cider_d");
  }
  std::vector<RunScore> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 3) throw std::runtime_error(fmt::format("run CSV line {}: expected 3 fields", i + 1));
    RunScore r;
    r.setting_id = row[0];
    const auto& seed = row[1];
    const auto& score = row[2];
    if (std::from_chars(seed.data(), seed.data() + seed.size(), r.seed).ptr != seed.data() + seed.size() ||
        std::from_chars(score.data(), score.data() + score.size(), r.cider_d).ptr != score.data() + score.size()) {
      throw std::runtime_error(fmt::format("run CSV line {}: malformed seed or score", i + 1));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_summary_csv(std::span<const ScoreSummary> rows) {
  std::string out = "setting_id,mean,sd,min,q1,median,q3,max,n\n";
  for (const auto& s : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv::quote_if_needed(s.setting_id), s.mean, s.sd, s.min, s.q1,
                       s.median, s.q3, s.max, s.n);
  }
  return out;
}

}  // namespace aac
