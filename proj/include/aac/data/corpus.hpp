#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "aac/data/audio.hpp"
#include "aac/data/dataset.hpp"
#include "aac/numerics/rng.hpp"

namespace aac {

/// Directory layout shared by `synth`, training and evaluation:
///   captions/{train,validation,evaluation}.csv
///   embeddings/<encoder>_<overlap>/<clip stem>.aemb
///   word_vectors/<source>.txt
struct CorpusLayout {
  std::filesystem::path root;

  std::filesystem::path captions(Split split) const;
  std::filesystem::path embedding(EncoderId encoder, Overlap overlap, const std::string& clip_id) const;
  std::filesystem::path word_vectors(WordSource source) const;
};

/// Closed token grammar: "<source> <action> <place>" scenes rendered through
/// five caption templates.
struct SyntheticGrammar {
  std::vector<std::string> sources;
  std::vector<std::string> actions;
  std::vector<std::string> places;
  // Distinct templates among a clip's five captions; 1 gives five identical captions.
  std::size_t paraphrases = 5;

  static SyntheticGrammar standard();
  /// Every token the grammar can emit, sorted.
  std::vector<std::string> token_set() const;
};

struct SyntheticOptions {
  std::size_t clips = 20;
  SyntheticGrammar grammar = SyntheticGrammar::standard();
  double frame_rate = 10.0;
  std::size_t frames = 100;
  std::size_t feature_dim = 16;
  double noise = 0.05;
};

struct Scene {
  std::size_t source = 0;
  std::size_t action = 0;
  std::size_t place = 0;
};

struct SyntheticCorpus {
  CaptionDataset train{Split::train, {}};
  CaptionDataset validation{Split::validation, {}};
  CaptionDataset evaluation{Split::evaluation, {}};
  std::map<std::string, Scene> scenes;
  std::map<std::string, FeatureSequence> features;

  const CaptionDataset& split(Split s) const;
};

/// Train/validation/evaluation clip counts for 65 / 17.5 / 17.5 percent,
/// by largest remainder; equal remainders favour the later split.
std::array<std::size_t, 3> synthetic_split_sizes(std::size_t clips);

/// Requires clips >= 3. Frame features are the sum of fixed per-slot
/// prototype vectors plus small per-frame noise, so the scene (and thus the
/// caption) is recoverable from any window. Training clips cycle through
/// every slot value before drawing at random, so the train split covers the
/// grammar whenever it has at least as many clips as the largest slot.
SyntheticCorpus make_synthetic_corpus(std::uint64_t seed, const SyntheticOptions& options = {});

/// Encoders whose embedding files `write_synthetic_corpus` emits: the four
/// named ones plus a 64-dimensional, 1 s mock encoder.
std::vector<EncoderSpec> synthetic_encoders();

/// Writes captions, embedding files for every encoder in `encoders` and both
/// overlaps, word-vector files for each pre-trained source, and corpus.json.
void write_synthetic_corpus(const std::filesystem::path& root, const SyntheticCorpus& corpus, std::uint64_t seed,
                            const std::vector<EncoderSpec>& encoders = synthetic_encoders());

}  // namespace aac
