#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <stdexcept>

#include "aac/data/corpus.hpp"
#include "aac/experiment/config.hpp"
#include "aac/experiment/evaluate.hpp"
#include "aac/experiment/grid.hpp"
#include "aac/experiment/report.hpp"
#include "aac/experiment/suite.hpp"
#include "aac/experiment/trainer.hpp"
#include "aac/io/bytes.hpp"
#include "aac/model/checkpoint.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRunFailures = 1;
constexpr int kInvalidInput = 2;

// Input problems (bad config, missing files) exit 2; failures while training exit 1.
struct RunFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_log_csv(const aac::TrainResult& result) {
  std::string out = "epoch,train_loss,validation_loss\n";
  for (const auto& e : result.log) out += fmt::format("{},{},{}\n", e.epoch, e.train_loss, e.validation_loss);
  return out;
}

int cmd_train(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& data_dir,
              const std::filesystem::path& out, bool quiet) {
  aac::ExperimentConfig cfg = aac::load_experiment_config(config_path);
  if (seed) cfg.seed = *seed;
  if (!data_dir.empty()) cfg.data_dir = data_dir;
  cfg.validate();
  aac::TrainingData data = aac::load_training_data(cfg);
  const aac::CorpusLayout layout{cfg.data_dir};
  const auto evaluation = aac::read_caption_csv(layout.captions(aac::Split::evaluation), aac::Split::evaluation);
  const auto eval_store = aac::EmbeddingStore::load(layout, cfg.encoder_id, cfg.overlap, {&evaluation});
  auto model = aac::build_model(cfg, data.vocab, data.embeddings.feature_dim(), aac::build_word_table(cfg, data.vocab, layout));

  aac::TrainResult result;
  try {
    result = aac::run_training(cfg, std::move(model), data, [&](const aac::EpochLog& e) {
      if (!quiet) fmt::print(stderr, "epoch {:>3}  train {:.6f}  validation {:.6f}\n", e.epoch, e.train_loss, e.validation_loss);
    });
  } catch (const std::runtime_error& e) {
    throw RunFailure(e.what());
  }
  const auto scores = aac::evaluate_model(result.model, evaluation, data.vocab, eval_store, cfg.setting_id(), cfg.seed);
  aac::save_checkpoint(out / "checkpoint.aack", result.model, aac::training_metadata(cfg, data.vocab, result));
  aac::io::write_file(out / "train_log.csv", format_log_csv(result));
  aac::io::write_file(out / "scores.csv", aac::format_example_scores_csv(scores));
  fmt::print("{} seed {}: best epoch {} of {}, validation loss {:.6f}, CIDEr-D {:.6f}\n", cfg.setting_id(), cfg.seed,
             result.best_epoch, result.log.size(), result.best_validation_loss, scores.report.corpus_cider_d);
  return kOk;
}

int cmd_eval(const std::filesystem::path& checkpoint_path, const std::filesystem::path& data_dir, const std::string& out) {
  const aac::Checkpoint checkpoint = aac::load_checkpoint(checkpoint_path);
  const auto& meta = checkpoint.metadata;
  if (!meta.contains("experiment") || !meta.contains("vocabulary")) {
    throw std::invalid_argument(fmt::format("{}: checkpoint lacks experiment or vocabulary metadata", checkpoint_path.string()));
  }
  const auto cfg = meta.at("experiment").get<aac::ExperimentConfig>();
  const auto vocab = aac::Vocabulary::from_tokens(meta.at("vocabulary").get<std::vector<std::string>>());
  const aac::CorpusLayout layout{data_dir};
  const auto evaluation = aac::read_caption_csv(layout.captions(aac::Split::evaluation), aac::Split::evaluation);
  const auto store = aac::EmbeddingStore::load(layout, cfg.encoder_id, cfg.overlap, {&evaluation});
  const auto result = aac::evaluate_model(checkpoint.model, evaluation, vocab, store, cfg.setting_id(), cfg.seed);
  if (!out.empty()) aac::io::write_file(out, aac::format_example_scores_csv(result));
  fmt::print("{} seed {}: CIDEr-D {:.6f} over {} clips\n", cfg.setting_id(), cfg.seed, result.report.corpus_cider_d,
             result.report.per_example.size());
  return kOk;
}

aac::ExperimentConfig base_config(const std::string& config_path, const std::string& profile) {
  if (!config_path.empty()) return aac::load_experiment_config(config_path);
  return aac::named_profile(profile);
}

int cmd_grid(const std::string& filter, bool list, const std::string& config_path, const std::string& profile) {
  const auto settings = aac::enumerate_grid(base_config(config_path, profile), aac::GridFilter::parse(filter));
  if (list) {
    for (const auto& s : settings) fmt::print("{}\n", s.setting_id());
  } else {
    fmt::print("{}\n", settings.size());
  }
  return kOk;
}

// A grid file is an experiment config plus an optional "filter" expression.
int cmd_suite(const std::filesystem::path& grid_path, const std::string& seeds, std::size_t jobs,
              const std::filesystem::path& out, bool save_checkpoints, bool quiet) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(aac::io::read_file(grid_path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", grid_path.string(), e.what()));
  }
  const std::string filter = j.value("filter", std::string());
  j.erase("filter");
  aac::ExperimentConfig defaults;
  try {
    defaults = j.get<aac::ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", grid_path.string(), e.what()));
  }
  if (!defaults.data_dir.empty() && defaults.data_dir.is_relative()) defaults.data_dir = grid_path.parent_path() / defaults.data_dir;
  const auto settings = aac::enumerate_grid(defaults, aac::GridFilter::parse(filter));
  if (settings.empty()) throw std::invalid_argument("the grid filter selects no settings");
  for (const auto& s : settings) s.validate();

  aac::SuiteOptions options;
  options.seeds = aac::parse_seed_list(seeds);
  options.jobs = jobs;
  if (save_checkpoints) options.checkpoint_dir = out / "checkpoints";
  options.on_run = [&](const aac::RunOutcome& r) {
    if (quiet) return;
    if (r.ok()) {
      fmt::print(stderr, "{} seed {}: CIDEr-D {:.6f} (best epoch {} of {})\n", r.setting_id, r.seed, *r.cider_d,
                 r.best_epoch, r.epochs);
    } else {
      fmt::print(stderr, "{} seed {}: FAILED: {}\n", r.setting_id, r.seed, r.error);
    }
  };
  const auto result = aac::run_suite(settings, options, aac::default_contrasts(settings));
  aac::io::write_file(out / "outcomes.csv", aac::format_outcome_csv(result.runs));
  aac::io::write_file(out / "significance.csv", aac::format_contrast_csv(result.contrasts));
  const auto scores = result.scores();
  if (!scores.empty()) aac::write_report(scores, out);
  const std::size_t failed = static_cast<std::size_t>(
      std::count_if(result.runs.begin(), result.runs.end(), [](const aac::RunOutcome& r) { return !r.ok(); }));
  fmt::print("{} runs, {} failed, {} settings summarized\n", result.runs.size(), failed, result.summaries.size());
  return failed == 0 ? kOk : kRunFailures;
}

int cmd_report(const std::filesystem::path& runs_path, const std::filesystem::path& out) {
  std::vector<aac::RunScore> runs;
  try {
    runs = aac::parse_run_csv(aac::io::read_file(runs_path));
  } catch (const std::runtime_error& e) {
    throw std::invalid_argument(fmt::format("{}: {}", runs_path.string(), e.what()));
  }
  const auto files = aac::write_report(std::move(runs), out);
  fmt::print("wrote {}, {} and {} boxplot(s) to {}\n", files.summary_csv.string(), files.runs_csv.string(),
             files.boxplots.size(), out.string());
  return kOk;
}

int cmd_synth(std::size_t clips, std::uint64_t seed, std::size_t paraphrases, const std::filesystem::path& out) {
  aac::SyntheticOptions options;
  options.clips = clips;
  options.grammar.paraphrases = paraphrases;
  const auto corpus = aac::make_synthetic_corpus(seed, options);
  aac::write_synthetic_corpus(out, corpus, seed);
  fmt::print("wrote {} clips ({} train, {} validation, {} evaluation) to {}\n", clips, corpus.train.clips.size(),
             corpus.validation.clips.size(), corpus.evaluation.clips.size(), out.string());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio captioning experiments: synthetic data, training, evaluation and grid suites"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "Train one setting and evaluate its best checkpoint");
  std::string train_config, train_data;
  std::optional<std::uint64_t> train_seed;
  std::string train_out;
  bool train_quiet = false;
  train->add_option("--config", train_config, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", train_seed, "Run seed (overrides the config)");
  train->add_option("--data", train_data, "Corpus directory (overrides data_dir)");
  train->add_option("--out", train_out, "Output directory")->required();
  train->add_flag("--quiet", train_quiet, "Suppress per-epoch logging");

  auto* eval = app.add_subcommand("eval", "Score a checkpoint on a corpus's evaluation split");
  std::string eval_checkpoint, eval_data, eval_out;
  eval->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", eval_data, "Corpus directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", eval_out, "Per-clip score CSV to write");

  auto* grid = app.add_subcommand("grid", "Enumerate grid settings");
  std::string grid_filter, grid_config, grid_profile = "desk";
  bool grid_list = false;
  grid->add_option("--filter", grid_filter, "e.g. encoder=vggish,word_source=glove|w2v");
  grid->add_flag("--list", grid_list, "Print setting ids instead of the count");
  grid->add_option("--config", grid_config, "Base config JSON")->check(CLI::ExistingFile);
  grid->add_option("--profile", grid_profile, "Base profile when no config is given")->check(CLI::IsMember({"desk", "paper"}));

  auto* suite = app.add_subcommand("suite", "Train and evaluate every setting x seed of a grid");
  std::string suite_grid, suite_seeds = "1..10", suite_out;
  std::size_t suite_jobs = 1;
  bool suite_checkpoints = false, suite_quiet = false;
  suite->add_option("--grid", suite_grid, "Grid file: a config plus an optional \"filter\"")->required()->check(CLI::ExistingFile);
  suite->add_option("--seeds", suite_seeds, "Seed list such as 1..10 or 1,4,9")->capture_default_str();
  suite->add_option("--jobs", suite_jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  suite->add_option("--out", suite_out, "Output directory")->required();
  suite->add_flag("--save-checkpoints", suite_checkpoints, "Keep every run's best checkpoint");
  suite->add_flag("--quiet", suite_quiet, "Suppress per-run logging");

  auto* report = app.add_subcommand("report", "Summary CSV and boxplots from a per-run score CSV");
  std::string report_runs, report_out;
  report->add_option("--runs", report_runs, "CSV with setting_id,seed,cider_d")->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Output directory")->required();

  auto* synth = app.add_subcommand("synth", "Write a synthetic captioning corpus");
  std::size_t synth_clips = 20, synth_paraphrases = 5;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  synth->add_option("--clips", synth_clips, "Number of clips")->capture_default_str()->check(CLI::Range(3, 1000000));
  synth->add_option("--seed", synth_seed, "Generation seed")->capture_default_str();
  synth->add_option("--paraphrases", synth_paraphrases, "Distinct caption templates per clip (1..5)")->capture_default_str()
      ->check(CLI::Range(1, 5));
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*train) return cmd_train(train_config, train_seed, train_data, train_out, train_quiet);
    if (*eval) return cmd_eval(eval_checkpoint, eval_data, eval_out);
    if (*grid) return cmd_grid(grid_filter, grid_list, grid_config, grid_profile);
    if (*suite) return cmd_suite(suite_grid, suite_seeds, suite_jobs, suite_out, suite_checkpoints, suite_quiet);
    if (*report) return cmd_report(report_runs, report_out);
    if (*synth) return cmd_synth(synth_clips, synth_seed, synth_paraphrases, synth_out);
  } catch (const RunFailure& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kRunFailures;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kInvalidInput;
  }
  return kInvalidInput;
}
