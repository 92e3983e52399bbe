#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "diffsub/shape.hpp"
#include "diffsub/ssa.hpp"

namespace dsub::cli {

/// Malformed or unreadable input file (exit code 1).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid flag or configuration value (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 12 significant digits, "nan" for NaN.
std::string format_number(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line of each row

  /// Column position by name; throws InputError naming `path` when absent.
  std::size_t column(std::string_view name, const std::string& path) const;
};

/// Comma separated, first non-empty line is the header, every row must have
/// as many fields as the header. Blank lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

double parse_double(std::string_view field, const std::string& where);
long parse_integer(std::string_view field, const std::string& where);

/// Header `frame,point,x,y,z`. Frames are sorted by index and each frame's
/// rows by point id; every frame must carry the same point ids.
std::vector<PointCloudFrame> read_point_cloud_csv(const std::filesystem::path& path);

struct LabeledSignal {
  SignalSeries series;
  std::vector<long> labels;  // the t column, strictly increasing
};

/// Header `t,value` with strictly increasing integer t.
LabeledSignal read_signal_csv(const std::filesystem::path& path);

/// Headerless numeric matrix, one row per line.
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& content);

std::string shape_series_csv(const ShapeSeriesResult& result);
std::string signal_scores_csv(const AnomalyReport& report, const std::vector<long>& labels);
std::string detections_csv(const AnomalyReport& report, const std::vector<long>& labels);
std::string matrix_csv(const Matrix& m);
std::string point_cloud_csv(const std::vector<PointCloudFrame>& frames);
std::string signal_csv(const SignalSeries& series);

}  // namespace dsub::cli
