#include "aac/experiment/trainer.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "aac/data/audio.hpp"
#include "aac/data/word_vectors.hpp"
#include "aac/experiment/early_stopping.hpp"
#include "aac/numerics/adam.hpp"
#include "aac/numerics/ops.hpp"
#include "aac/numerics/rng.hpp"

namespace aac {

std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) {
  return Rng(seed).fork(static_cast<std::uint64_t>(stream)).next_u64();
}

EmbeddingStore EmbeddingStore::load(const CorpusLayout& layout, EncoderId encoder, Overlap overlap,
                                    const std::vector<const CaptionDataset*>& datasets) {
  std::map<std::string, Tensor> sequences;
  std::vector<std::string> missing;
  for (const CaptionDataset* dataset : datasets) {
    for (const auto& clip : dataset->clips) {
      if (sequences.count(clip.clip_id)) continue;
      const auto path = layout.embedding(encoder, overlap, clip.clip_id);
      if (!std::filesystem::exists(path)) {
        missing.push_back(clip.clip_id);
        continue;
      }
      EmbeddingSequence z = load_audio_embedding_file(path);
      if (z.encoder != encoder || z.overlap != overlap) {
        throw std::runtime_error(fmt::format("{}: holds {}/{} embeddings, expected {}/{}", path.string(),
                                             to_string(z.encoder), to_string(z.overlap), to_string(encoder),
                                             to_string(overlap)));
      }
      sequences.emplace(clip.clip_id, z.values);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& id : missing) list += (list.empty() ? "" : ", ") + id;
    throw std::runtime_error(fmt::format("missing {}_{} embedding files under {} for {} clip(s): {}", to_string(encoder),
                                         to_string(overlap), layout.root.string(), missing.size(), list));
  }
  return from_map(std::move(sequences));
}

EmbeddingStore EmbeddingStore::from_map(std::map<std::string, Tensor> sequences) {
  std::size_t dim = 0;
  for (const auto& [id, z] : sequences) {
    if (z.shape().size() != 2) throw std::invalid_argument(fmt::format("embedding of {} is not a matrix", id));
    if (dim == 0) dim = z.cols();
    if (z.cols() != dim) {
      throw std::invalid_argument(fmt::format("embedding of {} has {} features, others have {}", id, z.cols(), dim));
    }
  }
  EmbeddingStore store;
  store.sequences_ = std::move(sequences);
  return store;
}

const Tensor& EmbeddingStore::at(const std::string& clip_id) const {
  const auto it = sequences_.find(clip_id);
  if (it == sequences_.end()) throw std::out_of_range(fmt::format("no embedding loaded for clip {}", clip_id));
  return it->second;
}

std::size_t EmbeddingStore::feature_dim() const {
  if (sequences_.empty()) throw std::logic_error("embedding store is empty");
  return sequences_.begin()->second.cols();
}

std::vector<TokenizedExample> tokenize_dataset(const CaptionDataset& dataset, const Vocabulary& vocab) {
  std::vector<TokenizedExample> out;
  out.reserve(dataset.size());
  for (const auto& clip : dataset.clips)
    for (const auto& caption : clip.captions) out.push_back({clip.clip_id, vocab.encode(tokenize_caption(caption))});
  return out;
}

TrainingData load_training_data(const ExperimentConfig& cfg) {
  if (cfg.data_dir.empty()) throw std::invalid_argument("data_dir is not set");
  const CorpusLayout layout{cfg.data_dir};
  const CaptionDataset train = read_caption_csv(layout.captions(Split::train), Split::train);
  const CaptionDataset validation = read_caption_csv(layout.captions(Split::validation), Split::validation);
  if (train.clips.empty()) throw std::runtime_error("the train split is empty");
  Vocabulary vocab = Vocabulary::build(train, cfg.min_count);
  auto train_examples = tokenize_dataset(train, vocab);
  auto validation_examples = tokenize_dataset(validation, vocab);
  EmbeddingStore store = EmbeddingStore::load(layout, cfg.encoder_id, cfg.overlap, {&train, &validation});
  return TrainingData{std::move(vocab), std::move(train_examples), std::move(validation_examples), std::move(store)};
}

WordEmbeddingTable build_word_table(const ExperimentConfig& cfg, const Vocabulary& vocab, const CorpusLayout& layout) {
  const std::uint64_t seed = derive_seed(cfg.seed, SeedStream::word_table);
  if (cfg.word_source == WordSource::random || cfg.word_source == WordSource::scratch) {
    return random_word_table(vocab, cfg.random_word_dim, cfg.word_source, cfg.fine_tune, seed);
  }
  return load_word_embedding_table(layout.word_vectors(cfg.word_source), vocab, cfg.word_source, cfg.fine_tune, seed);
}

CaptionModel build_model(const ExperimentConfig& cfg, const Vocabulary& vocab, std::size_t feature_dim,
                         WordEmbeddingTable table) {
  cfg.validate();
  AdapterConfig adapter = cfg.adapter;
  adapter.input_dim = feature_dim;
  adapter.output_dim = adapter.kind == AdapterKind::identity ? feature_dim : cfg.decoder.model_width;
  DecoderConfig decoder = cfg.decoder;
  decoder.vocab_size = vocab.size();
  decoder.word_dim = table.dim();
  return CaptionModel::create(adapter, decoder, std::move(table), derive_seed(cfg.seed, SeedStream::init));
}

namespace {

std::span<const std::size_t> truncated(const std::vector<std::size_t>& tokens, std::size_t max_caption_len) {
  const std::size_t keep = std::min(tokens.size(), max_caption_len - 1);
  return std::span<const std::size_t>(tokens.data(), keep);
}

}  // namespace

double dataset_loss(const CaptionModel& model, const std::vector<TokenizedExample>& examples,
                    const EmbeddingStore& embeddings, std::size_t max_caption_len) {
  if (examples.empty()) throw std::invalid_argument("cannot compute a loss over an empty split");
  NoGradGuard no_grad;
  double weighted = 0.0;
  double tokens = 0.0;
  for (const auto& ex : examples) {
    const auto caption = truncated(ex.tokens, max_caption_len);
    const double n = static_cast<double>(caption.size() + 1);
    weighted += n * model.caption_loss(embeddings.at(ex.clip_id), caption, Vocabulary::kEnd).item();
    tokens += n;
  }
  return weighted / tokens;
}

TrainResult run_training(const ExperimentConfig& cfg, CaptionModel model, const TrainingData& data,
                         const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.train.empty()) throw std::runtime_error("the train split is empty");
  if (data.validation.empty()) throw std::runtime_error("the validation split is empty");
  const std::size_t max_len = model.decoder().config.max_caption_len;

  Adam adam(model.trainable_parameters(), cfg.optimizer);
  Rng shuffle_rng(derive_seed(cfg.seed, SeedStream::shuffle));
  TrainState state(cfg.patience, cfg.max_epochs);
  TrainResult result{model.clone(), {}, 0, 0.0};
  std::vector<std::size_t> order(data.train.size());
  std::uint64_t step = 0;

  while (!state.stopped()) {
    const std::size_t epoch = state.epoch() + 1;
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    double epoch_weighted = 0.0;
    double epoch_tokens = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      double batch_tokens = 0.0;
      for (std::size_t i = start; i < stop; ++i)
        batch_tokens += static_cast<double>(truncated(data.train[order[i]].tokens, max_len).size() + 1);

      adam.zero_grad();
      // Per-example backward of the token-weighted share accumulates the
      // same gradient as one backward of the batch loss.
      for (std::size_t i = start; i < stop; ++i) {
        const auto& ex = data.train[order[i]];
        const auto caption = truncated(ex.tokens, max_len);
        const double n = static_cast<double>(caption.size() + 1);
        const Tensor loss = model.caption_loss(data.embeddings.at(ex.clip_id), caption, Vocabulary::kEnd);
        const double value = loss.item();
        if (!std::isfinite(value)) {
          throw std::runtime_error(fmt::format("{} seed {}: non-finite training loss {} at epoch {}, step {}, clip {}",
                                               cfg.setting_id(), cfg.seed, value, epoch, step + 1, ex.clip_id));
        }
        backward(scale(loss, n / batch_tokens));
        epoch_weighted += n * value;
        epoch_tokens += n;
      }
      adam.step(++step);
    }

    EpochLog entry{epoch, epoch_weighted / epoch_tokens, dataset_loss(model, data.validation, data.embeddings, max_len)};
    if (!std::isfinite(entry.validation_loss)) {
      throw std::runtime_error(fmt::format("{} seed {}: non-finite validation loss {} at epoch {}", cfg.setting_id(),
                                           cfg.seed, entry.validation_loss, epoch));
    }
    const auto update = state.record(entry.validation_loss);
    if (update.improved) result.model = model.clone();
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  result.best_epoch = state.best_epoch();
  result.best_validation_loss = state.best_loss();
  return result;
}

TrainResult run_training(const ExperimentConfig& cfg, const TrainingData& data, const EpochCallback& on_epoch) {
  const CorpusLayout layout{cfg.data_dir};
  CaptionModel model =
      build_model(cfg, data.vocab, data.embeddings.feature_dim(), build_word_table(cfg, data.vocab, layout));
  return run_training(cfg, std::move(model), data, on_epoch);
}

nlohmann::json training_metadata(const ExperimentConfig& cfg, const Vocabulary& vocab, const TrainResult& result) {
  nlohmann::json log = nlohmann::json::array();
  for (const auto& e : result.log)
    log.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_loss", e.validation_loss}});
  return {{"experiment", cfg},
          {"setting_id", cfg.setting_id()},
          {"vocabulary", vocab.tokens()},
          {"best_epoch", result.best_epoch},
          {"best_validation_loss", result.best_validation_loss},
          {"log", log}};
}

}  // namespace aac
