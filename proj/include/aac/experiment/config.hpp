#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "aac/model/config.hpp"
#include "aac/numerics/adam.hpp"

namespace aac {

/// One cell of the experiment grid plus everything needed to train it.
struct ExperimentConfig {
  EncoderId encoder_id = EncoderId::vggish;
  Overlap overlap = Overlap::none;
  // Only the kind and the mlp/mha sizes are read; input/output dims are
  // derived from the data and the decoder width.
  AdapterConfig adapter;
  WordSource word_source = WordSource::random;
  bool fine_tune = false;
  std::uint64_t seed = 1;
  // vocab_size and word_dim are filled in from the vocabulary and word table.
  DecoderConfig decoder;
  OptimizerConfig optimizer;
  std::size_t batch_size = 16;
  std::size_t patience = 10;
  std::size_t max_epochs = 200;

  std::size_t min_count = 1;
  std::size_t random_word_dim = 300;  // W' for random/scratch tables
  std::filesystem::path data_dir;

  /// `<encoder>-<overlap>-<adapter>-<source>-<fixed|ft>`.
  std::string setting_id() const;
  /// Throws std::invalid_argument, e.g. for bert_static with fine_tune.
  void validate() const;
};

/// Batch 16, width 64 (4 heads of 16), 2 blocks, 32-dim random word vectors.
ExperimentConfig desk_profile();
/// Batch 256, width 512 (4 heads of 128), 3 blocks, Adam 0.001/0.9/0.999/1e-8,
/// patience 10, 300-dim random word vectors.
ExperimentConfig paper_profile();
/// "desk" or "paper".
ExperimentConfig named_profile(std::string_view name);

void to_json(nlohmann::json& j, const ExperimentConfig& c);
/// Starts from the profile named by "profile" (default desk) and applies
/// every other field present.
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// Reads a JSON config; a relative data_dir resolves against the file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

}  // namespace aac
