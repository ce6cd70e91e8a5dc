#include "aac/data/audio.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

#include "aac/io/bytes.hpp"
#include "aac/numerics/rng.hpp"

namespace aac {

namespace {
constexpr std::string_view kMagic = "AEMB";
}

std::string encode_embedding_file(const EmbeddingSequence& z) {
  z.validate();
  io::ByteWriter w;
  w.put_bytes(kMagic);
  w.put_uint<std::uint16_t>(kEmbeddingFileVersion);
  w.put_uint<std::uint8_t>(static_cast<std::uint8_t>(z.encoder));
  w.put_uint<std::uint8_t>(static_cast<std::uint8_t>(z.overlap));
  w.put_f32(static_cast<float>(z.window_seconds));
  w.put_f32(static_cast<float>(z.hop_seconds));
  w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(z.length()));
  w.put_uint<std::uint32_t>(static_cast<std::uint32_t>(z.features()));
  for (double v : z.values.data()) w.put_f32(static_cast<float>(v));
  return w.take();
}

EmbeddingSequence decode_embedding_file(std::string_view bytes) {
  io::ByteReader r(bytes);
  if (r.remaining() < kMagic.size() || r.get_bytes(kMagic.size()) != kMagic) {
    throw std::runtime_error("not an audio embedding file (bad magic)");
  }
  const auto version = r.get_uint<std::uint16_t>();
  if (version != kEmbeddingFileVersion) {
    throw std::runtime_error(fmt::format("unsupported embedding file version {} (expected {})", version, kEmbeddingFileVersion));
  }
  const auto encoder = r.get_uint<std::uint8_t>();
  if (encoder > static_cast<std::uint8_t>(EncoderId::mock)) throw std::runtime_error(fmt::format("unknown encoder id {}", encoder));
  const auto overlap = r.get_uint<std::uint8_t>();
  if (overlap > static_cast<std::uint8_t>(Overlap::half)) throw std::runtime_error(fmt::format("unknown overlap code {}", overlap));

  EmbeddingSequence z;
  z.encoder = static_cast<EncoderId>(encoder);
  z.overlap = static_cast<Overlap>(overlap);
  z.window_seconds = r.get_f32();
  z.hop_seconds = r.get_f32();
  const std::size_t t = r.get_uint<std::uint32_t>();
  const std::size_t f = r.get_uint<std::uint32_t>();
  if (t == 0 || f == 0) throw std::runtime_error(fmt::format("embedding header declares an empty {}x{} sequence", t, f));
  if (auto dim = encoder_dimension(z.encoder); dim && *dim != f) {
    throw std::runtime_error(fmt::format("encoder {} produces {}-dimensional embeddings, header declares F'={}",
                                         to_string(z.encoder), *dim, f));
  }
  const std::size_t payload = t * f * sizeof(float);
  if (r.remaining() != payload) {
    throw std::runtime_error(fmt::format("embedding payload is {} bytes, header declares {}x{} ({} bytes)", r.remaining(), t, f, payload));
  }
  std::vector<double> values(t * f);
  for (double& v : values) v = r.get_f32();
  z.values = Tensor::from({t, f}, std::move(values));
  try {
    z.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(e.what());
  }
  return z;
}

void write_embedding_file(const std::filesystem::path& path, const EmbeddingSequence& z) {
  io::write_file(path, encode_embedding_file(z));
}

EmbeddingSequence load_audio_embedding_file(const std::filesystem::path& path) {
  try {
    return decode_embedding_file(io::read_file(path));
  } catch (const std::exception& e) {
    throw std::runtime_error(fmt::format("{}: {}", path.string(), e.what()));
  }
}

EncoderSpec EncoderSpec::named(EncoderId id) {
  switch (id) {
    case EncoderId::vggish: return {id, 128, 0.96, "supervised"};
    case EncoderId::yamnet: return {id, 1024, 0.96, "supervised"};
    case EncoderId::openl3: return {id, 512, 1.00, "self-supervised"};
    case EncoderId::coala: return {id, 1152, 2.20, "contrastive"};
    case EncoderId::mock: break;
  }
  throw std::invalid_argument("the mock encoder has no fixed geometry; use EncoderSpec::mock");
}

EncoderSpec EncoderSpec::mock(std::size_t embedding_dim, double window_seconds) {
  if (embedding_dim == 0 || !(window_seconds > 0.0)) throw std::invalid_argument("mock encoder needs a positive dimension and window");
  return {EncoderId::mock, embedding_dim, window_seconds, "mock"};
}

WindowGeometry window_geometry(std::size_t frames, double frame_rate, double window_seconds, Overlap overlap) {
  if (!(frame_rate > 0.0) || !(window_seconds > 0.0)) throw std::invalid_argument("frame rate and window must be positive");
  const auto window = static_cast<std::size_t>(std::llround(window_seconds * frame_rate));
  if (window == 0) throw std::invalid_argument(fmt::format("a {} s window is shorter than one frame at {} fps", window_seconds, frame_rate));
  const std::size_t hop = overlap == Overlap::none ? window : window / 2;
  if (hop == 0) throw std::invalid_argument("a one-frame window cannot be half-overlapped");
  if (frames < window) {
    throw std::invalid_argument(fmt::format("sequence of {} frames is shorter than the {}-frame window", frames, window));
  }
  return {window, hop, (frames - window) / hop + 1};
}

EmbeddingSequence window_embed(const FeatureSequence& x, const EncoderSpec& spec, Overlap overlap,
                               std::uint64_t projection_seed) {
  const std::size_t frames = x.values.rows(), features = x.values.cols();
  const WindowGeometry g = window_geometry(frames, x.frame_rate, spec.window_seconds, overlap);

  Rng rng(projection_seed);
  const double bound = std::sqrt(3.0 / static_cast<double>(features));
  std::vector<double> projection(features * spec.embedding_dim);
  for (double& v : projection) v = rng.uniform(-bound, bound);

  const auto d = x.values.data();
  std::vector<double> out(g.count * spec.embedding_dim, 0.0);
  std::vector<double> pooled(features);
  for (std::size_t t = 0; t < g.count; ++t) {
    std::fill(pooled.begin(), pooled.end(), 0.0);
    const std::size_t start = t * g.hop;
    for (std::size_t i = start; i < start + g.window; ++i)
      for (std::size_t f = 0; f < features; ++f) pooled[f] += d[i * features + f];
    for (double& p : pooled) p /= static_cast<double>(g.window);
    for (std::size_t f = 0; f < features; ++f)
      for (std::size_t e = 0; e < spec.embedding_dim; ++e)
        out[t * spec.embedding_dim + e] += pooled[f] * projection[f * spec.embedding_dim + e];
  }

  EmbeddingSequence z;
  z.values = Tensor::from({g.count, spec.embedding_dim}, std::move(out));
  z.encoder = spec.id;
  z.overlap = overlap;
  z.window_seconds = static_cast<double>(g.window) / x.frame_rate;
  z.hop_seconds = static_cast<double>(g.hop) / x.frame_rate;
  if (spec.id != EncoderId::mock) {
    // Named encoders report their nominal geometry.
    z.window_seconds = spec.window_seconds;
    z.hop_seconds = overlap == Overlap::none ? spec.window_seconds : spec.window_seconds / 2;
  }
  return z;
}

}  // namespace aac
