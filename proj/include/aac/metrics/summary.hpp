#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aac {

/// Evaluation of one (setting, seed) run. SPICE, and therefore SPIDEr, is not
/// computed; both stay empty.
struct ScoreReport {
  std::string setting_id;
  std::uint64_t seed = 0;
  std::vector<std::string> clip_ids;
  std::vector<double> per_example;  // CIDEr-D per evaluation clip
  double corpus_cider_d = 0.0;      // mean of per_example
  std::optional<double> spice;
  std::optional<double> spider;

  static ScoreReport from_scores(std::string setting_id, std::uint64_t seed, std::vector<std::string> clip_ids,
                                 std::vector<double> per_example);
};

/// One row of the score CSV `setting_id,seed,cider_d`.
struct RunScore {
  std::string setting_id;
  std::uint64_t seed = 0;
  double cider_d = 0.0;
};

/// Mean, sample standard deviation and the five-number summary (quartiles by
/// linear interpolation between order statistics).
struct ScoreSummary {
  std::string setting_id;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  // n == 1: sd reported as 0
};

ScoreSummary summarize(const std::string& setting_id, std::span<const double> values);

/// Groups by setting id (sorted) and summarizes each group.
std::vector<ScoreSummary> summarize_scores(std::span<const RunScore> runs);

std::string format_run_csv(std::span<const RunScore> runs);
std::vector<RunScore> parse_run_csv(const std::string& text);
std::string format_summary_csv(std::span<const ScoreSummary> rows);

}  // namespace aac
