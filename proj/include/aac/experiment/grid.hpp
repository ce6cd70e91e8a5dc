#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aac/experiment/config.hpp"

namespace aac {

/// Restricts grid axes to listed values. Parsed from `key=v1|v2,key=v` with
/// keys encoder, overlap, adapter, word_source and fine_tune (true|false,
/// or ft|fixed). An empty expression keeps every setting.
struct GridFilter {
  std::map<std::string, std::vector<std::string>> allowed;

  static GridFilter parse(std::string_view expression);
  bool accepts(const ExperimentConfig& config) const;
};

/// The five sources tried both fixed and fine-tuned; bert_static is fixed only.
std::vector<WordSource> grid_word_sources();

/// Encoders x overlaps x adapters x word settings, in that nesting order,
/// each a copy of `defaults` with the axis fields replaced.
std::vector<ExperimentConfig> enumerate_grid(const ExperimentConfig& defaults, const GridFilter& filter = {});

}  // namespace aac
