#include "aac/experiment/config.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "aac/io/bytes.hpp"

namespace aac {

std::string ExperimentConfig::setting_id() const {
  return fmt::format("{}-{}-{}-{}-{}", to_string(encoder_id), to_string(overlap), to_string(adapter.kind),
                     to_string(word_source), fine_tune ? "ft" : "fixed");
}

void ExperimentConfig::validate() const {
  if (word_source == WordSource::bert_static && fine_tune) {
    throw std::invalid_argument("bert_static word embeddings are fixed; fine_tune must be false");
  }
  if (batch_size == 0) throw std::invalid_argument("batch_size must be at least 1");
  if (patience == 0) throw std::invalid_argument("patience must be at least 1");
  if (max_epochs == 0) throw std::invalid_argument("max_epochs must be at least 1");
  if (random_word_dim == 0) throw std::invalid_argument("random_word_dim must be positive");
  optimizer.validate();
  DecoderConfig probe = decoder;
  probe.vocab_size = std::max<std::size_t>(probe.vocab_size, 1);
  probe.validate();
  if (adapter.kind == AdapterKind::mlp && adapter.hidden == 0) throw std::invalid_argument("adapter hidden size must be positive");
  if (adapter.kind == AdapterKind::mha && adapter.heads * adapter.head_dim != decoder.model_width) {
    throw std::invalid_argument(fmt::format("mha adapter {} heads x {} dims must equal the decoder width {}", adapter.heads,
                                            adapter.head_dim, decoder.model_width));
  }
}

ExperimentConfig desk_profile() {
  ExperimentConfig c;
  c.decoder.num_blocks = 2;
  c.decoder.heads = 4;
  c.decoder.head_dim = 16;
  c.decoder.model_width = 64;
  c.decoder.max_caption_len = 30;
  c.adapter.hidden = 64;
  c.adapter.heads = 4;
  c.adapter.head_dim = 16;
  c.batch_size = 16;
  c.patience = 10;
  c.max_epochs = 200;
  c.random_word_dim = 32;
  return c;
}

ExperimentConfig paper_profile() {
  ExperimentConfig c;
  c.decoder.num_blocks = 3;
  c.decoder.heads = 4;
  c.decoder.head_dim = 128;
  c.decoder.model_width = 512;
  c.decoder.max_caption_len = 30;
  c.adapter.hidden = 256;
  c.adapter.heads = 4;
  c.adapter.head_dim = 128;
  c.optimizer = OptimizerConfig{0.001, 0.9, 0.999, 1e-8};
  c.batch_size = 256;
  c.patience = 10;
  c.max_epochs = 200;
  c.random_word_dim = 300;
  return c;
}

ExperimentConfig named_profile(std::string_view name) {
  if (name == "desk") return desk_profile();
  if (name == "paper") return paper_profile();
  throw std::invalid_argument(fmt::format("unknown profile '{}' (expected desk or paper)", name));
}

void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{
      {"encoder_id", std::string(to_string(c.encoder_id))},
      {"overlap", std::string(to_string(c.overlap))},
      {"adapter",
       {{"kind", std::string(to_string(c.adapter.kind))},
        {"hidden", c.adapter.hidden},
        {"heads", c.adapter.heads},
        {"head_dim", c.adapter.head_dim}}},
      {"word_source", std::string(to_string(c.word_source))},
      {"fine_tune", c.fine_tune},
      {"seed", c.seed},
      {"decoder", c.decoder},
      {"optimizer",
       {{"alpha", c.optimizer.alpha}, {"beta1", c.optimizer.beta1}, {"beta2", c.optimizer.beta2}, {"epsilon", c.optimizer.epsilon}}},
      {"batch_size", c.batch_size},
      {"patience", c.patience},
      {"max_epochs", c.max_epochs},
      {"min_count", c.min_count},
      {"random_word_dim", c.random_word_dim},
      {"data_dir", c.data_dir.string()},
  };
}

void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  c = named_profile(j.value("profile", std::string("desk")));
  if (j.contains("encoder_id")) c.encoder_id = parse_encoder_id(j.at("encoder_id").get<std::string>());
  if (j.contains("overlap")) c.overlap = parse_overlap(j.at("overlap").get<std::string>());
  if (j.contains("adapter")) {
    const auto& a = j.at("adapter");
    if (a.is_string()) {
      c.adapter.kind = parse_adapter_kind(a.get<std::string>());
    } else {
      c.adapter.kind = parse_adapter_kind(a.value("kind", std::string(to_string(c.adapter.kind))));
      c.adapter.hidden = a.value("hidden", c.adapter.hidden);
      c.adapter.heads = a.value("heads", c.adapter.heads);
      c.adapter.head_dim = a.value("head_dim", c.adapter.head_dim);
    }
  }
  if (j.contains("word_source")) c.word_source = parse_word_source(j.at("word_source").get<std::string>());
  c.fine_tune = j.value("fine_tune", c.fine_tune);
  c.seed = j.value("seed", c.seed);
  if (j.contains("decoder")) {
    nlohmann::json merged = c.decoder;
    merged.update(j.at("decoder"));
    c.decoder = merged.get<DecoderConfig>();
  }
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    c.optimizer.alpha = o.value("alpha", c.optimizer.alpha);
    c.optimizer.beta1 = o.value("beta1", c.optimizer.beta1);
    c.optimizer.beta2 = o.value("beta2", c.optimizer.beta2);
    c.optimizer.epsilon = o.value("epsilon", c.optimizer.epsilon);
  }
  c.batch_size = j.value("batch_size", c.batch_size);
  c.patience = j.value("patience", c.patience);
  c.max_epochs = j.value("max_epochs", c.max_epochs);
  c.min_count = j.value("min_count", c.min_count);
  c.random_word_dim = j.value("random_word_dim", c.random_word_dim);
  if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
  }
  ExperimentConfig c;
  try {
    c = j.get<ExperimentConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(fmt::format("{}: {}", path.string(), e.what()));
  }
  if (!c.data_dir.empty() && c.data_dir.is_relative()) c.data_dir = path.parent_path() / c.data_dir;
  return c;
}

}  // namespace aac
