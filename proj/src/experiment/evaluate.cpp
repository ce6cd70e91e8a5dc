#include "aac/experiment/evaluate.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "aac/io/csv.hpp"
#include "aac/metrics/cider.hpp"

namespace aac {

EvaluationResult evaluate_model(const CaptionModel& model, const CaptionDataset& evaluation, const Vocabulary& vocab,
                                const EmbeddingStore& embeddings, const std::string& setting_id, std::uint64_t seed) {
  if (model.decoder().config.vocab_size != vocab.size()) {
    throw std::invalid_argument(fmt::format("model vocabulary has {} entries, the supplied one {}",
                                            model.decoder().config.vocab_size, vocab.size()));
  }
  std::vector<std::string> missing;
  for (const auto& clip : evaluation.clips)
    if (!embeddings.contains(clip.clip_id)) missing.push_back(clip.clip_id);
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw std::runtime_error(fmt::format("no embedding for {} evaluation clip(s): {}", missing.size(), list));
  }

  std::vector<TokenSequence> candidates;
  for (const auto& clip : evaluation.clips)
    candidates.push_back(vocab.decode(model.greedy_decode(embeddings.at(clip.clip_id), Vocabulary::kEnd)));
  return score_captions(evaluation, candidates, setting_id, seed);
}

EvaluationResult score_captions(const CaptionDataset& evaluation, const std::vector<TokenSequence>& candidates,
                                const std::string& setting_id, std::uint64_t seed) {
  if (candidates.size() != evaluation.clips.size()) {
    throw std::invalid_argument(
        fmt::format("{} candidates for {} evaluation clips", candidates.size(), evaluation.clips.size()));
  }
  std::vector<std::vector<TokenSequence>> references;
  std::vector<std::string> clip_ids;
  EvaluationResult result;
  for (std::size_t i = 0; i < evaluation.clips.size(); ++i) {
    const auto& clip = evaluation.clips[i];
    std::vector<TokenSequence> refs;
    for (const auto& caption : clip.captions) refs.push_back(tokenize_caption(caption));
    references.push_back(std::move(refs));
    clip_ids.push_back(clip.clip_id);
    result.candidates.push_back(join_tokens(candidates[i]));
  }
  std::vector<double> scores;
  if (!candidates.empty()) scores = corpus_cider_d(candidates, references);
  result.report = ScoreReport::from_scores(setting_id, seed, std::move(clip_ids), std::move(scores));
  return result;
}

std::string format_example_scores_csv(const EvaluationResult& result) {
  std::string out = "clip_id,cider_d,candidate\n";
  for (std::size_t i = 0; i < result.report.clip_ids.size(); ++i) {
    out += fmt::format("{},{},{}\n", csv::quote_if_needed(result.report.clip_ids[i]), result.report.per_example[i],
                       csv::quote_if_needed(result.candidates[i]));
  }
  return out;
}

}  // namespace aac
