#pragma once

#include <filesystem>
#include <string>

#include "aac/model/caption_model.hpp"

namespace aac::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct TinySpec {
  AdapterKind adapter = AdapterKind::mha;
  std::size_t feature_dim = 4;  // F'
  std::size_t width = 8;
  std::size_t heads = 2;
  std::size_t blocks = 1;
  std::size_t vocab = 5;
  std::size_t word_dim = 6;
  std::size_t max_caption_len = 6;
  bool trainable_table = true;
  std::uint64_t seed = 1;
};

CaptionModel tiny_model(const TinySpec& spec = {});

}  // namespace aac::testing
