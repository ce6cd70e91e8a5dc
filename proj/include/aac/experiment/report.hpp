#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "aac/metrics/summary.hpp"

namespace aac {

/// Box-and-whisker chart (min, q1, median, q3, max) with one box per
/// summary, in the given order.
std::string render_boxplot_svg(const std::string& title, const std::vector<ScoreSummary>& rows);

/// Files written by write_report, relative to its output directory.
struct ReportFiles {
  std::filesystem::path summary_csv;
  std::filesystem::path runs_csv;
  std::vector<std::filesystem::path> boxplots;
};

/// Writes summary.csv, runs.csv (sorted by setting, seed) and
/// boxplots/<encoder>-<adapter>.svg per encoder x adapter group. Setting ids
/// not of the grid form share the group "other". Throws when `runs` is empty
/// or a file cannot be written.
ReportFiles write_report(std::vector<RunScore> runs, const std::filesystem::path& out_dir);

}  // namespace aac
