#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace aac {

enum class Split { train, validation, evaluation };
std::string_view to_string(Split split);

inline constexpr std::size_t kCaptionsPerClip = 5;

struct ClipCaptions {
  std::string clip_id;
  std::array<std::string, kCaptionsPerClip> captions;
};

/// Captioned clips of one split. Every clip carries five captions; each
/// (clip, caption) pair is one training example.
struct CaptionDataset {
  Split split = Split::train;
  std::vector<ClipCaptions> clips;

  struct Example {
    const std::string* clip_id;
    const std::string* caption;
  };
  std::vector<Example> examples() const;
  std::size_t size() const { return clips.size() * kCaptionsPerClip; }
};

/// Reads the Clotho caption CSV: header
/// `file_name,caption_1,caption_2,caption_3,caption_4,caption_5`.
CaptionDataset read_caption_csv(const std::filesystem::path& path, Split split);
std::string format_caption_csv(const CaptionDataset& dataset);
void write_caption_csv(const std::filesystem::path& path, const CaptionDataset& dataset);

}  // namespace aac
