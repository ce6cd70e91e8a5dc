#include "aac/model/checkpoint.hpp"

#include <fmt/format.h>

#include <stdexcept>

#include "aac/io/bytes.hpp"

namespace aac {

namespace {
constexpr std::string_view kMagic = "AACK";
}

std::string encode_checkpoint(const CaptionModel& model, const nlohmann::json& metadata) {
  const ParamList params = model.parameters();
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& p : params) manifest.push_back({{"name", p.name}, {"shape", p.tensor.shape()}});
  const nlohmann::json header{
      {"adapter", model.adapter().config},
      {"decoder", model.decoder().config},
      {"memory_dim", model.decoder().memory_dim},
      {"word_table",
       {{"source", std::string(to_string(model.table().source))}, {"trainable", model.table().trainable}}},
      {"params", manifest},
      {"metadata", metadata.is_null() ? nlohmann::json::object() : metadata},
  };
  const std::string text = header.dump();

  io::ByteWriter w;
  w.put_bytes(kMagic);
  w.put_uint<std::uint32_t>(kCheckpointVersion);
  w.put_uint<std::uint64_t>(text.size());
  w.put_bytes(text);
  w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    w.put_uint<std::uint64_t>(p.tensor.numel());
    for (double v : p.tensor.data()) w.put_f64(v);
  }
  return w.take();
}

Checkpoint decode_checkpoint(const std::string& bytes) {
  io::ByteReader r(bytes);
  if (r.remaining() < kMagic.size() || r.get_bytes(kMagic.size()) != kMagic) {
    throw std::runtime_error("not a checkpoint file (bad magic)");
  }
  const auto version = r.get_uint<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw std::runtime_error(fmt::format("unsupported checkpoint version {} (expected {})", version, kCheckpointVersion));
  }
  const auto header_size = r.get_uint<std::uint64_t>();
  const nlohmann::json header = nlohmann::json::parse(r.get_bytes(header_size));

  const auto adapter = header.at("adapter").get<AdapterConfig>();
  const auto decoder = header.at("decoder").get<DecoderConfig>();
  const auto& table_meta = header.at("word_table");
  const WordSource source = parse_word_source(table_meta.at("source").get<std::string>());
  const bool trainable = table_meta.at("trainable").get<bool>();

  WordEmbeddingTable placeholder{Tensor::zeros({decoder.vocab_size, decoder.word_dim}, trainable), source, trainable};
  Checkpoint ckpt{CaptionModel::create(adapter, decoder, std::move(placeholder), 0), header.value("metadata", nlohmann::json::object())};

  ParamList params = ckpt.model.parameters();
  const auto& manifest = header.at("params");
  const auto count = r.get_uint<std::uint32_t>();
  if (count != params.size() || manifest.size() != params.size()) {
    throw std::runtime_error(fmt::format("checkpoint holds {} tensors, model expects {}", count, params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (manifest[i].at("name").get<std::string>() != p.name || manifest[i].at("shape").get<Shape>() != p.tensor.shape()) {
      throw std::runtime_error(fmt::format("checkpoint tensor {} does not match parameter {}", i, p.name));
    }
    const auto n = r.get_uint<std::uint64_t>();
    if (n != p.tensor.numel()) {
      throw std::runtime_error(fmt::format("checkpoint tensor {} has {} values, expected {}", p.name, n, p.tensor.numel()));
    }
    auto values = p.tensor.mutable_data();
    for (auto& v : values) v = r.get_f64();
  }
  if (r.remaining() != 0) throw std::runtime_error(fmt::format("{} trailing bytes after checkpoint payload", r.remaining()));
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const CaptionModel& model, const nlohmann::json& metadata) {
  io::write_file(path, encode_checkpoint(model, metadata));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return decode_checkpoint(io::read_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace aac
