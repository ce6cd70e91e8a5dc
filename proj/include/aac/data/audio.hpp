#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "aac/model/types.hpp"

namespace aac {

// Audio embedding file, all fields little-endian:
//   "AEMB" | u16 version | u8 encoder id | u8 overlap | f32 window_seconds
//   | f32 hop_seconds | u32 T' | u32 F' | T' x F' f32, row-major
inline constexpr std::uint16_t kEmbeddingFileVersion = 1;

/// Values are narrowed to f32 on write.
std::string encode_embedding_file(const EmbeddingSequence& z);
EmbeddingSequence decode_embedding_file(std::string_view bytes);

void write_embedding_file(const std::filesystem::path& path, const EmbeddingSequence& z);
EmbeddingSequence load_audio_embedding_file(const std::filesystem::path& path);

/// Frame-level input features X (T x F).
struct FeatureSequence {
  Tensor values;
  double frame_rate = 1.0;  // frames per second
};

/// Geometry of an audio encoder.
struct EncoderSpec {
  EncoderId id = EncoderId::mock;
  std::size_t embedding_dim = 0;
  double window_seconds = 1.0;
  std::string training_regime;

  /// The four pre-trained encoders compared in the study.
  static EncoderSpec named(EncoderId id);
  static EncoderSpec mock(std::size_t embedding_dim, double window_seconds);
};

struct WindowGeometry {
  std::size_t window = 0;  // frames
  std::size_t hop = 0;     // frames
  std::size_t count = 0;   // T'
};

/// w = round(window_seconds * frame_rate); hop = w (none) or floor(w / 2)
/// (half); T' = floor((T - w) / hop) + 1. Throws when T < w or w < 1.
WindowGeometry window_geometry(std::size_t frames, double frame_rate, double window_seconds, Overlap overlap);

inline constexpr std::uint64_t kMockProjectionSeed = 0x4D4F434B454E43ULL;

/// Stand-in encoder: mean-pools each window and maps it through a fixed
/// random F x embedding_dim matrix drawn from `projection_seed`. Trailing
/// frames that do not fill a window are dropped.
EmbeddingSequence window_embed(const FeatureSequence& x, const EncoderSpec& spec, Overlap overlap,
                               std::uint64_t projection_seed = kMockProjectionSeed);

}  // namespace aac
