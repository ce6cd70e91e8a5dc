#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "aac/data/corpus.hpp"
#include "aac/data/dataset.hpp"
#include "aac/data/text.hpp"
#include "aac/experiment/config.hpp"
#include "aac/model/caption_model.hpp"

namespace aac {

/// Fixed offsets of the per-run sub-seed streams.
enum class SeedStream : std::uint64_t { init = 1, shuffle = 2, word_table = 3, data = 4 };
std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream);

/// Per-clip audio embedding sequences Z of one encoder/overlap pair.
class EmbeddingStore {
 public:
  /// Loads every clip of every dataset. Throws std::runtime_error naming
  /// each clip whose file is missing.
  static EmbeddingStore load(const CorpusLayout& layout, EncoderId encoder, Overlap overlap,
                             const std::vector<const CaptionDataset*>& datasets);
  /// Wraps sequences already in memory.
  static EmbeddingStore from_map(std::map<std::string, Tensor> sequences);

  const Tensor& at(const std::string& clip_id) const;
  bool contains(const std::string& clip_id) const { return sequences_.count(clip_id) != 0; }
  /// F' shared by every sequence.
  std::size_t feature_dim() const;

 private:
  std::map<std::string, Tensor> sequences_;
};

/// A clip index and its encoded caption (without the end token).
struct TokenizedExample {
  std::string clip_id;
  std::vector<std::size_t> tokens;
};

std::vector<TokenizedExample> tokenize_dataset(const CaptionDataset& dataset, const Vocabulary& vocab);

struct TrainingData {
  Vocabulary vocab;
  std::vector<TokenizedExample> train;
  std::vector<TokenizedExample> validation;
  EmbeddingStore embeddings;
};

/// Reads the train and validation captions under cfg.data_dir, builds the
/// vocabulary from the train split and loads the matching embeddings.
TrainingData load_training_data(const ExperimentConfig& cfg);

/// Word table for cfg.word_source: random rows for random/scratch, otherwise
/// the vector file under `layout`.
WordEmbeddingTable build_word_table(const ExperimentConfig& cfg, const Vocabulary& vocab, const CorpusLayout& layout);

/// Untrained model with adapter and decoder sizes resolved against the data.
CaptionModel build_model(const ExperimentConfig& cfg, const Vocabulary& vocab, std::size_t feature_dim,
                         WordEmbeddingTable table);

struct EpochLog {
  std::size_t epoch = 0;
  double train_loss = 0.0;       // token-weighted over the epoch's updates
  double validation_loss = 0.0;  // token-weighted over the whole split
};

struct TrainResult {
  CaptionModel model;  // restored best checkpoint
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;
  double best_validation_loss = 0.0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

/// Pad-masked mean token cross-entropy over `examples`, teacher-forced, no grad.
double dataset_loss(const CaptionModel& model, const std::vector<TokenizedExample>& examples,
                    const EmbeddingStore& embeddings, std::size_t max_caption_len);

/// Adam on token-weighted minibatch cross-entropy with seeded shuffling,
/// validation after every epoch and patience-based early stopping. Captions
/// longer than max_caption_len - 1 tokens are truncated. Throws on an empty
/// train or validation split and on a non-finite loss.
TrainResult run_training(const ExperimentConfig& cfg, CaptionModel model, const TrainingData& data,
                         const EpochCallback& on_epoch = {});

/// Loads data, builds the model and trains it.
TrainResult run_training(const ExperimentConfig& cfg, const TrainingData& data, const EpochCallback& on_epoch = {});

/// Checkpoint metadata: the config, vocabulary and training log.
nlohmann::json training_metadata(const ExperimentConfig& cfg, const Vocabulary& vocab, const TrainResult& result);

}  // namespace aac
