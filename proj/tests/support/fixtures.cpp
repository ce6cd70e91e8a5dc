#include "fixtures.hpp"

#include <atomic>
#include <unistd.h>

#include "aac/numerics/rng.hpp"
#include "gradcheck.hpp"

namespace aac::testing {

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("aac_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

CaptionModel tiny_model(const TinySpec& spec) {
  AdapterConfig adapter;
  adapter.kind = spec.adapter;
  adapter.input_dim = spec.feature_dim;
  adapter.hidden = 5;
  adapter.heads = spec.heads;
  adapter.head_dim = spec.width / spec.heads;
  adapter.output_dim = spec.adapter == AdapterKind::identity ? spec.feature_dim : spec.width;
  DecoderConfig decoder;
  decoder.num_blocks = spec.blocks;
  decoder.heads = spec.heads;
  decoder.head_dim = spec.width / spec.heads;
  decoder.model_width = spec.width;
  decoder.max_caption_len = spec.max_caption_len;
  decoder.vocab_size = spec.vocab;
  decoder.word_dim = spec.word_dim;
  Tensor rows = random_leaf({spec.vocab, spec.word_dim}, spec.seed + 1000, false);
  auto table = WordEmbeddingTable::create(rows, WordSource::random, spec.trainable_table);
  return CaptionModel::create(adapter, decoder, table, spec.seed);
}

}  // namespace aac::testing
