#include "aac/model/config.hpp"

#include <fmt/format.h>

#include <stdexcept>

namespace aac {

void AdapterConfig::validate(std::size_t model_width) const {
  if (input_dim == 0) throw std::invalid_argument("adapter: input_dim must be positive");
  switch (kind) {
    case AdapterKind::identity:
      if (output_dim != input_dim) {
        throw std::invalid_argument(
            fmt::format("identity adapter: output_dim {} must equal input_dim {}", output_dim, input_dim));
      }
      break;
    case AdapterKind::mlp:
      if (hidden == 0) throw std::invalid_argument("mlp adapter: hidden size must be positive");
      [[fallthrough]];
    case AdapterKind::mha:
      if (output_dim != model_width) {
        throw std::invalid_argument(fmt::format("{} adapter: output_dim {} must equal decoder width {}",
                                                to_string(kind), output_dim, model_width));
      }
      if (kind == AdapterKind::mha && (heads == 0 || head_dim == 0 || heads * head_dim != output_dim)) {
        throw std::invalid_argument(
            fmt::format("mha adapter: {} heads x {} dims does not match output_dim {}", heads, head_dim, output_dim));
      }
      break;
  }
}

void DecoderConfig::validate() const {
  if (num_blocks == 0 || heads == 0 || head_dim == 0 || vocab_size == 0 || word_dim == 0) {
    throw std::invalid_argument("decoder: num_blocks, heads, head_dim, vocab_size and word_dim must be positive");
  }
  if (model_width != heads * head_dim) {
    throw std::invalid_argument(
        fmt::format("decoder: model_width {} != heads {} x head_dim {}", model_width, heads, head_dim));
  }
  if (max_caption_len < 2) throw std::invalid_argument("decoder: max_caption_len must be at least 2");
  if (feed_forward == FeedForwardKind::standard && ff_hidden == 0) {
    throw std::invalid_argument("decoder: ff_hidden must be positive");
  }
  if (dropout != 0.0) throw std::invalid_argument("decoder: dropout is not supported, keep it at 0");
  if (!(layer_norm_eps > 0.0)) throw std::invalid_argument("decoder: layer_norm_eps must be positive");
}

void to_json(nlohmann::json& j, const AdapterConfig& c) {
  j = nlohmann::json{{"kind", std::string(to_string(c.kind))},
                     {"input_dim", c.input_dim},
                     {"hidden", c.hidden},
                     {"heads", c.heads},
                     {"head_dim", c.head_dim},
                     {"output_dim", c.output_dim}};
}

void from_json(const nlohmann::json& j, AdapterConfig& c) {
  AdapterConfig d;
  c.kind = parse_adapter_kind(j.value("kind", std::string(to_string(d.kind))));
  c.input_dim = j.value("input_dim", d.input_dim);
  c.hidden = j.value("hidden", d.hidden);
  c.heads = j.value("heads", d.heads);
  c.head_dim = j.value("head_dim", d.head_dim);
  c.output_dim = j.value("output_dim", d.output_dim);
}

void to_json(nlohmann::json& j, const DecoderConfig& c) {
  j = nlohmann::json{{"num_blocks", c.num_blocks},
                     {"heads", c.heads},
                     {"head_dim", c.head_dim},
                     {"model_width", c.model_width},
                     {"max_caption_len", c.max_caption_len},
                     {"vocab_size", c.vocab_size},
                     {"word_dim", c.word_dim},
                     {"feed_forward", c.feed_forward == FeedForwardKind::linear ? "linear" : "standard"},
                     {"ff_hidden", c.ff_hidden},
                     {"dropout", c.dropout},
                     {"layer_norm_eps", c.layer_norm_eps}};
}

void from_json(const nlohmann::json& j, DecoderConfig& c) {
  DecoderConfig d;
  c.num_blocks = j.value("num_blocks", d.num_blocks);
  c.heads = j.value("heads", d.heads);
  c.head_dim = j.value("head_dim", d.head_dim);
  c.model_width = j.value("model_width", c.heads * c.head_dim);
  c.max_caption_len = j.value("max_caption_len", d.max_caption_len);
  c.vocab_size = j.value("vocab_size", d.vocab_size);
  c.word_dim = j.value("word_dim", d.word_dim);
  const std::string ff = j.value("feed_forward", std::string("linear"));
  if (ff == "linear") {
    c.feed_forward = FeedForwardKind::linear;
  } else if (ff == "standard") {
    c.feed_forward = FeedForwardKind::standard;
  } else {
    throw std::invalid_argument(fmt::format("unknown feed_forward '{}' (expected linear or standard)", ff));
  }
  c.ff_hidden = j.value("ff_hidden", d.ff_hidden);
  c.dropout = j.value("dropout", d.dropout);
  c.layer_norm_eps = j.value("layer_norm_eps", d.layer_norm_eps);
}

}  // namespace aac
