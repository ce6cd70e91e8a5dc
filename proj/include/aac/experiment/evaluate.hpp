#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aac/data/dataset.hpp"
#include "aac/data/text.hpp"
#include "aac/experiment/trainer.hpp"
#include "aac/metrics/cider.hpp"
#include "aac/metrics/summary.hpp"
#include "aac/model/caption_model.hpp"

namespace aac {

struct EvaluationResult {
  ScoreReport report;
  std::vector<std::string> candidates;  // decoded caption per clip, space-joined
};

/// Greedy-decodes one caption per evaluation clip and scores it against the
/// clip's five references with CIDEr-D; document frequencies come from the
/// evaluation references. Throws std::runtime_error listing every clip
/// without an embedding.
EvaluationResult evaluate_model(const CaptionModel& model, const CaptionDataset& evaluation, const Vocabulary& vocab,
                                const EmbeddingStore& embeddings, const std::string& setting_id = {},
                                std::uint64_t seed = 0);

/// Scores one decoded token sequence per evaluation clip, in clip order.
EvaluationResult score_captions(const CaptionDataset& evaluation, const std::vector<TokenSequence>& candidates,
                                const std::string& setting_id = {}, std::uint64_t seed = 0);

/// `clip_id,cider_d,candidate` per clip.
std::string format_example_scores_csv(const EvaluationResult& result);

}  // namespace aac
