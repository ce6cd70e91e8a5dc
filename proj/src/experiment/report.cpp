#include "aac/experiment/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "aac/io/bytes.hpp"

namespace aac {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string group_of(const std::string& setting_id) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dash = setting_id.find('-', start);
    parts.push_back(setting_id.substr(start, dash == std::string::npos ? std::string::npos : dash - start));
    if (dash == std::string::npos) break;
    start = dash + 1;
  }
  if (parts.size() != 5) return "other";
  return parts[0] + "-" + parts[2];
}

}  // namespace

std::string render_boxplot_svg(const std::string& title, const std::vector<ScoreSummary>& rows) {
  constexpr double kBoxWidth = 40.0, kSpacing = 70.0, kLeft = 70.0, kTop = 40.0, kPlotHeight = 300.0, kLabelSpace = 200.0;
  const double width = kLeft + kSpacing * static_cast<double>(std::max<std::size_t>(rows.size(), 1)) + 20.0;
  const double height = kTop + kPlotHeight + kLabelSpace;
  double lo = 0.0, hi = 0.0;
  if (!rows.empty()) {
    lo = rows.front().min;
    hi = rows.front().max;
    for (const auto& r : rows) {
      lo = std::min(lo, r.min);
      hi = std::max(hi, r.max);
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const auto y = [&](double v) { return kTop + kPlotHeight * (hi - v) / (hi - lo); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      width, height, width, height);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">{}</text>\n", kLeft,
                     xml_escape(title));
  svg += fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", kLeft - 10.0,
                     kTop, kTop + kPlotHeight);
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = lo + (hi - lo) * tick / 4.0;
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">{:.3f}</text>\n",
        kLeft - 14.0, y(v) + 3.0, v);
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const double cx = kLeft + kSpacing * (static_cast<double>(i) + 0.5);
    const double x0 = cx - kBoxWidth / 2.0;
    svg += fmt::format("<g class=\"box\" data-setting=\"{}\" data-n=\"{}\">\n", xml_escape(r.setting_id), r.n);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx, y(r.max),
                       y(r.q3));
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx, y(r.q1),
                       y(r.min));
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#9ecae1\" stroke=\"black\"/>\n", x0,
        y(r.q3), kBoxWidth, y(r.q1) - y(r.q3));
    svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" stroke-width=\"2\"/>\n",
                       x0, y(r.median), x0 + kBoxWidth, y(r.median));
    for (double v : {r.min, r.max}) {
      svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n",
                         cx - kBoxWidth / 4.0, y(v), cx + kBoxWidth / 4.0, y(v));
    }
    const double ly = kTop + kPlotHeight + 12.0;
    svg += fmt::format(
        "<text x=\"{0:.2f}\" y=\"{1:.2f}\" font-family=\"sans-serif\" font-size=\"10\" "
        "transform=\"rotate(60 {0:.2f} {1:.2f})\">{2}</text>\n",
        cx, ly, xml_escape(r.setting_id));
    svg += "</g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

ReportFiles write_report(std::vector<RunScore> runs, const std::filesystem::path& out_dir) {
  if (runs.empty()) throw std::invalid_argument("a report needs at least one run");
  std::sort(runs.begin(), runs.end(), [](const RunScore& a, const RunScore& b) {
    return std::tie(a.setting_id, a.seed) < std::tie(b.setting_id, b.seed);
  });
  const auto summaries = summarize_scores(runs);
  ReportFiles files{"summary.csv", "runs.csv", {}};
  io::write_file(out_dir / files.summary_csv, format_summary_csv(summaries));
  io::write_file(out_dir / files.runs_csv, format_run_csv(runs));

  std::map<std::string, std::vector<ScoreSummary>> groups;
  for (const auto& s : summaries) groups[group_of(s.setting_id)].push_back(s);
  for (const auto& [group, rows] : groups) {
    const std::filesystem::path rel = std::filesystem::path("boxplots") / (group + ".svg");
    io::write_file(out_dir / rel, render_boxplot_svg(fmt::format("CIDEr-D, {}", group), rows));
    files.boxplots.push_back(rel);
  }
  return files;
}

}  // namespace aac
