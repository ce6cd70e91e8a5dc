#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aac/experiment/config.hpp"
#include "aac/experiment/evaluate.hpp"
#include "aac/experiment/trainer.hpp"
#include "aac/metrics/summary.hpp"
#include "aac/metrics/wilcoxon.hpp"

namespace aac {

struct ExperimentRun {
  Vocabulary vocab;
  TrainResult training;
  EvaluationResult evaluation;
};

/// Trains on cfg.data_dir and evaluates the restored best model on its
/// evaluation split.
ExperimentRun train_and_evaluate(const ExperimentConfig& cfg, const EpochCallback& on_epoch = {});

/// Outcome of one (setting, seed) run; `error` is set instead of scores on failure.
struct RunOutcome {
  std::string setting_id;
  std::uint64_t seed = 0;
  std::optional<double> cider_d;
  std::size_t best_epoch = 0;
  std::size_t epochs = 0;
  std::string error;

  bool ok() const { return cider_d.has_value(); }
};

/// Paired comparison: treatment minus baseline over every listed setting
/// pair and every seed both sides completed.
struct Contrast {
  std::string name;
  std::vector<std::pair<std::string, std::string>> pairs;  // (treatment id, baseline id)
};

struct ContrastResult {
  std::string name;
  std::size_t differences = 0;
  std::optional<SignificanceResult> significance;  // empty when no difference is nonzero
  std::string note;
};

/// Overlap half vs none per encoder, and fine-tuned vs fixed per word source,
/// pairing settings of `configs` that differ in that axis only.
std::vector<Contrast> default_contrasts(const std::vector<ExperimentConfig>& configs);

ContrastResult evaluate_contrast(const Contrast& contrast, const std::vector<RunOutcome>& runs);

struct SuiteOptions {
  std::vector<std::uint64_t> seeds;
  std::size_t jobs = 1;
  // When set, each run's best checkpoint goes to <dir>/<setting>/seed_<n>.aack.
  std::optional<std::filesystem::path> checkpoint_dir;
  // Called from worker threads, serialized by the suite.
  std::function<void(const RunOutcome&)> on_run;
};

struct SuiteResult {
  std::vector<RunOutcome> runs;  // sorted by setting id, then seed
  std::vector<ScoreSummary> summaries;
  std::vector<ContrastResult> contrasts;

  bool has_failures() const;
  std::vector<RunScore> scores() const;
};

/// Every (setting, seed) pair runs independently on a pool of `jobs`
/// threads; a failing run is recorded and the rest continue. Outputs do not
/// depend on the number of jobs.
SuiteResult run_suite(const std::vector<ExperimentConfig>& settings, const SuiteOptions& options,
                      const std::vector<Contrast>& contrasts = {});

/// Same scheduling with a caller-supplied run body.
using RunFunction = std::function<RunOutcome(const ExperimentConfig&)>;
SuiteResult run_suite_with(const std::vector<ExperimentConfig>& settings, const SuiteOptions& options,
                           const std::vector<Contrast>& contrasts, const RunFunction& run);

/// `name,differences,n_effective,w_plus,p_one_sided,method,note`.
std::string format_contrast_csv(const std::vector<ContrastResult>& rows);
/// `setting_id,seed,status,cider_d,best_epoch,epochs,error`.
std::string format_outcome_csv(const std::vector<RunOutcome>& runs);

/// Parses "1..10", "1,3,5" or a mix such as "1..3,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace aac
