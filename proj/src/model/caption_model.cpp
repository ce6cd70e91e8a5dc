#include "aac/model/caption_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <stdexcept>

#include "aac/numerics/ops.hpp"

namespace aac {

CaptionModel CaptionModel::create(const AdapterConfig& adapter, const DecoderConfig& decoder, WordEmbeddingTable table,
                                  std::uint64_t seed) {
  decoder.validate();
  adapter.validate(decoder.model_width);
  if (table.vocab_size() != decoder.vocab_size || table.dim() != decoder.word_dim) {
    throw std::invalid_argument(fmt::format("word table is {}x{} but decoder expects W={} W'={}", table.vocab_size(),
                                            table.dim(), decoder.vocab_size, decoder.word_dim));
  }
  Rng rng(seed);
  Rng adapter_rng = rng.fork(1);
  Rng decoder_rng = rng.fork(2);
  CaptionModel model;
  model.adapter_ = AdapterParams::init(adapter, decoder.layer_norm_eps, adapter_rng);
  model.decoder_ = DecoderParams::init(decoder, adapter.output_dim, decoder_rng);
  model.table_ = std::move(table);
  return model;
}

ParamList CaptionModel::parameters() const {
  ParamList out;
  adapter_.collect(out, "adapter");
  decoder_.collect(out, "decoder");
  out.push_back({"word_table", table_.rows});
  return out;
}

std::vector<Tensor> CaptionModel::trainable_parameters() const {
  std::vector<Tensor> out;
  for (auto& p : parameters())
    if (p.tensor.requires_grad()) out.push_back(p.tensor);
  return out;
}

AdaptedSequence CaptionModel::adapt(const Tensor& z) const { return AdaptedSequence{adapter_.forward(z)}; }

Tensor CaptionModel::logits(const AdaptedSequence& memory, std::span<const std::size_t> tokens) const {
  return decoder_forward(memory, embed_tokens(tokens, table_), decoder_);
}

Tensor CaptionModel::caption_loss(const Tensor& z, std::span<const std::size_t> caption, std::size_t end_token) const {
  std::vector<std::size_t> targets(caption.begin(), caption.end());
  targets.push_back(end_token);
  const Tensor out = logits(adapt(z), caption);
  return cross_entropy_masked(out, targets, std::vector<bool>(targets.size(), true));
}

std::vector<std::size_t> CaptionModel::greedy_decode(const Tensor& z, std::size_t end_token) const {
  NoGradGuard no_grad;
  return aac::greedy_decode(adapt(z), table_, decoder_, end_token);
}

CaptionModel CaptionModel::clone() const {
  CaptionModel copy = *this;  // shares tensors; rebind below
  Rng unused(0);
  copy.adapter_ = AdapterParams::init(adapter_.config, decoder_.config.layer_norm_eps, unused);
  copy.decoder_ = DecoderParams::init(decoder_.config, decoder_.memory_dim, unused);
  copy.table_.rows = table_.rows.clone();
  copy.load_values(*this);
  return copy;
}

void CaptionModel::load_values(const CaptionModel& other) {
  ParamList mine = parameters();
  const ParamList theirs = other.parameters();
  if (mine.size() != theirs.size()) throw std::invalid_argument("load_values: models differ in structure");
  for (std::size_t i = 0; i < mine.size(); ++i) {
    if (mine[i].name != theirs[i].name || mine[i].tensor.shape() != theirs[i].tensor.shape()) {
      throw std::invalid_argument(fmt::format("load_values: parameter {} does not match {}", mine[i].name, theirs[i].name));
    }
    const auto src = theirs[i].tensor.data();
    std::copy(src.begin(), src.end(), mine[i].tensor.mutable_data().begin());
  }
}

}  // namespace aac
