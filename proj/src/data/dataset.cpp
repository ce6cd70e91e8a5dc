#include "aac/data/dataset.hpp"

#include <fmt/format.h>

#include <set>
#include <stdexcept>

#include "aac/io/csv.hpp"
#include "aac/io/bytes.hpp"

namespace aac {

namespace {
const csv::Row kHeader{"file_name", "caption_1", "caption_2", "caption_3", "caption_4", "caption_5"};
}

std::string_view to_string(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::evaluation: return "evaluation";
  }
  return "?";
}

std::vector<CaptionDataset::Example> CaptionDataset::examples() const {
  std::vector<Example> out;
  out.reserve(size());
  for (const auto& clip : clips)
    for (const auto& caption : clip.captions) out.push_back({&clip.clip_id, &caption});
  return out;
}

CaptionDataset read_caption_csv(const std::filesystem::path& path, Split split) {
  const auto rows = csv::parse(io::read_file(path));
  if (rows.empty() || rows.front() != kHeader) {
    throw std::runtime_error(fmt::format("{}: expected the header file_name,caption_1,...,caption_5", path.string()));
  }
  CaptionDataset ds{split, {}};
  std::set<std::string> seen;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != kHeader.size()) {
      throw std::runtime_error(
          fmt::format("{}: row {} has {} fields, expected {}", path.string(), r + 1, row.size(), kHeader.size()));
    }
    if (!seen.insert(row[0]).second) {
      throw std::runtime_error(fmt::format("{}: clip '{}' appears twice", path.string(), row[0]));
    }
    ClipCaptions clip;
    clip.clip_id = row[0];
    for (std::size_t i = 0; i < kCaptionsPerClip; ++i) {
      if (row[i + 1].empty()) {
        throw std::runtime_error(fmt::format("{}: clip '{}' caption {} is empty", path.string(), row[0], i + 1));
      }
      clip.captions[i] = row[i + 1];
    }
    ds.clips.push_back(std::move(clip));
  }
  return ds;
}

std::string format_caption_csv(const CaptionDataset& dataset) {
  std::string out = csv::format_row(kHeader);
  for (const auto& clip : dataset.clips) {
    csv::Row row{clip.clip_id};
    row.insert(row.end(), clip.captions.begin(), clip.captions.end());
    out += csv::format_row(row);
  }
  return out;
}

void write_caption_csv(const std::filesystem::path& path, const CaptionDataset& dataset) {
  io::write_file(path, format_caption_csv(dataset));
}

}  // namespace aac
