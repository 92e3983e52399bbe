#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dsub::cli {

struct PlotSeries {
  std::string name;
  std::vector<double> values;  // NaN breaks the line
};

/// Self-contained SVG line chart sharing one x axis.
std::string line_chart_svg(const std::string& title, const std::vector<double>& x,
                           const std::vector<PlotSeries>& series);

/// Hex SHA-256 of the file contents.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;  // resolved, in flag order
  std::vector<std::filesystem::path> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
  std::string started;  // UTC, ISO 8601
  double duration_seconds = 0.0;
};

/// JSON with one key per line. The "timing" entry is the only line that
/// changes between identical runs.
std::string manifest_json(const RunManifest& manifest);

std::string utc_timestamp();

extern const char* const kToolVersion;

}  // namespace dsub::cli
