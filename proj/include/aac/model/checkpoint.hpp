#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "aac/model/caption_model.hpp"

namespace aac {

// Layout, all integers little-endian:
//   "AACK" | u32 version | u64 header bytes | UTF-8 JSON header
//   | u32 tensor count | per tensor: u64 element count, f64 values
// The header holds the adapter/decoder configs, word-table metadata, the
// parameter manifest (names and shapes, in declaration order) and a free-form
// "metadata" object supplied by the caller.
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  CaptionModel model;
  nlohmann::json metadata;
};

std::string encode_checkpoint(const CaptionModel& model, const nlohmann::json& metadata);
Checkpoint decode_checkpoint(const std::string& bytes);

void save_checkpoint(const std::filesystem::path& path, const CaptionModel& model, const nlohmann::json& metadata);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace aac
