#include "aac/experiment/suite.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "aac/io/csv.hpp"
#include "aac/model/checkpoint.hpp"

namespace aac {

ExperimentRun train_and_evaluate(const ExperimentConfig& cfg, const EpochCallback& on_epoch) {
  TrainingData data = load_training_data(cfg);
  TrainResult training = run_training(cfg, data, on_epoch);
  const CorpusLayout layout{cfg.data_dir};
  const CaptionDataset evaluation = read_caption_csv(layout.captions(Split::evaluation), Split::evaluation);
  const EmbeddingStore store = EmbeddingStore::load(layout, cfg.encoder_id, cfg.overlap, {&evaluation});
  EvaluationResult scores = evaluate_model(training.model, evaluation, data.vocab, store, cfg.setting_id(), cfg.seed);
  return ExperimentRun{std::move(data.vocab), std::move(training), std::move(scores)};
}

std::vector<Contrast> default_contrasts(const std::vector<ExperimentConfig>& configs) {
  std::map<std::string, const ExperimentConfig*> by_id;
  for (const auto& c : configs) by_id.emplace(c.setting_id(), &c);
  std::map<std::string, Contrast> contrasts;
  for (const auto& [id, c] : by_id) {
    if (c->overlap == Overlap::half) {
      ExperimentConfig base = *c;
      base.overlap = Overlap::none;
      if (by_id.count(base.setting_id())) {
        const std::string name = fmt::format("overlap_half_vs_none:{}", to_string(c->encoder_id));
        contrasts[name].name = name;
        contrasts[name].pairs.emplace_back(id, base.setting_id());
      }
    }
    if (c->fine_tune) {
      ExperimentConfig base = *c;
      base.fine_tune = false;
      if (by_id.count(base.setting_id())) {
        const std::string name = fmt::format("fine_tuned_vs_fixed:{}", to_string(c->word_source));
        contrasts[name].name = name;
        contrasts[name].pairs.emplace_back(id, base.setting_id());
      }
    }
  }
  std::vector<Contrast> out;
  for (auto& [name, contrast] : contrasts) out.push_back(std::move(contrast));
  return out;
}

ContrastResult evaluate_contrast(const Contrast& contrast, const std::vector<RunOutcome>& runs) {
  std::map<std::pair<std::string, std::uint64_t>, double> score;
  for (const auto& r : runs)
    if (r.ok()) score[{r.setting_id, r.seed}] = *r.cider_d;
  std::vector<double> diffs;
  for (const auto& [treatment, baseline] : contrast.pairs) {
    for (const auto& [key, value] : score) {
      if (key.first != treatment) continue;
      const auto other = score.find({baseline, key.second});
      if (other != score.end()) diffs.push_back(value - other->second);
    }
  }
  ContrastResult result{contrast.name, diffs.size(), std::nullopt, {}};
  if (diffs.empty()) {
    result.note = "no paired runs";
  } else if (std::all_of(diffs.begin(), diffs.end(), [](double d) { return d == 0.0; })) {
    result.note = "all differences are zero";
  } else {
    result.significance = wilcoxon_one_sided(diffs);
  }
  return result;
}

bool SuiteResult::has_failures() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunOutcome& r) { return !r.ok(); });
}

std::vector<RunScore> SuiteResult::scores() const {
  std::vector<RunScore> out;
  for (const auto& r : runs)
    if (r.ok()) out.push_back({r.setting_id, r.seed, *r.cider_d});
  return out;
}

SuiteResult run_suite_with(const std::vector<ExperimentConfig>& settings, const SuiteOptions& options,
                           const std::vector<Contrast>& contrasts, const RunFunction& run) {
  if (options.seeds.empty()) throw std::invalid_argument("a suite needs at least one seed");
  if (options.jobs == 0) throw std::invalid_argument("jobs must be at least 1");
  std::vector<ExperimentConfig> units;
  for (const auto& setting : settings) {
    for (std::uint64_t seed : options.seeds) {
      ExperimentConfig c = setting;
      c.seed = seed;
      units.push_back(std::move(c));
    }
  }

  std::vector<RunOutcome> outcomes(units.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < units.size(); i = next++) {
      const ExperimentConfig& cfg = units[i];
      RunOutcome outcome;
      try {
        outcome = run(cfg);
      } catch (const std::exception& e) {
        outcome = RunOutcome{};
        outcome.error = e.what();
      }
      outcome.setting_id = cfg.setting_id();
      outcome.seed = cfg.seed;
      if (!outcome.ok() && outcome.error.empty()) outcome.error = "run produced no score";
      outcomes[i] = outcome;
      if (options.on_run) {
        std::lock_guard lock(callback_mutex);
        options.on_run(outcome);
      }
    }
  };
  const std::size_t threads = std::min(options.jobs, std::max<std::size_t>(units.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(outcomes.begin(), outcomes.end(), [](const RunOutcome& a, const RunOutcome& b) {
    return std::tie(a.setting_id, a.seed) < std::tie(b.setting_id, b.seed);
  });
  SuiteResult result;
  result.runs = std::move(outcomes);
  const auto scores = result.scores();
  result.summaries = summarize_scores(scores);
  for (const auto& contrast : contrasts) result.contrasts.push_back(evaluate_contrast(contrast, result.runs));
  return result;
}

SuiteResult run_suite(const std::vector<ExperimentConfig>& settings, const SuiteOptions& options,
                      const std::vector<Contrast>& contrasts) {
  return run_suite_with(settings, options, contrasts, [&](const ExperimentConfig& cfg) {
    ExperimentRun run = train_and_evaluate(cfg);
    if (options.checkpoint_dir) {
      save_checkpoint(*options.checkpoint_dir / cfg.setting_id() / fmt::format("seed_{}.aack", cfg.seed),
                      run.training.model, training_metadata(cfg, run.vocab, run.training));
    }
    RunOutcome outcome;
    outcome.cider_d = run.evaluation.report.corpus_cider_d;
    outcome.best_epoch = run.training.best_epoch;
    outcome.epochs = run.training.log.size();
    return outcome;
  });
}

std::string format_contrast_csv(const std::vector<ContrastResult>& rows) {
  std::string out = "name,differences,n_effective,w_plus,p_one_sided,method,note\n";
  for (const auto& r : rows) {
    if (r.significance) {
      const auto& s = *r.significance;
      out += fmt::format("{},{},{},{},{},{},{}\n", csv::quote_if_needed(r.name), r.differences, s.n_effective, s.w_plus,
                         s.p_one_sided, to_string(s.method), csv::quote_if_needed(r.note));
    } else {
      out += fmt::format("{},{},0,,,,{}\n", csv::quote_if_needed(r.name), r.differences, csv::quote_if_needed(r.note));
    }
  }
  return out;
}

std::string format_outcome_csv(const std::vector<RunOutcome>& runs) {
  std::string out = "setting_id,seed,status,cider_d,best_epoch,epochs,error\n";
  for (const auto& r : runs) {
    out += fmt::format("{},{},{},{},{},{},{}\n", csv::quote_if_needed(r.setting_id), r.seed, r.ok() ? "ok" : "failed",
                       r.ok() ? fmt::format("{}", *r.cider_d) : std::string(), r.best_epoch, r.epochs,
                       csv::quote_if_needed(r.error));
  }
  return out;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  const auto number = [&](std::string_view s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument(fmt::format("malformed seed '{}' in '{}'", s, text));
    }
    return v;
  };
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string_view part = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    const auto dots = part.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(number(part));
    } else {
      const auto lo = number(part.substr(0, dots));
      const auto hi = number(part.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument(fmt::format("seed range '{}' is descending", part));
      if (hi - lo >= 100000) throw std::invalid_argument(fmt::format("seed range '{}' is too large", part));
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  std::sort(seeds.begin(), seeds.end());
  if (std::adjacent_find(seeds.begin(), seeds.end()) != seeds.end()) {
    throw std::invalid_argument(fmt::format("seed list '{}' repeats a seed", text));
  }
  return seeds;
}

}  // namespace aac
