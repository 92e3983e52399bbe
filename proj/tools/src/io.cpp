#include "diffsub_cli/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace dsub::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  return in;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

std::size_t CsvTable::column(std::string_view name, const std::string& path) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw InputError(path + ":1: missing column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw InputError(location(path, number) + ": expected " + std::to_string(table.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.line_numbers.push_back(number);
  }
  if (!have_header) throw InputError(path.string() + ": empty file");
  return table;
}

double parse_double(std::string_view field, const std::string& where) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw InputError(where + ": not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw InputError(where + ": non-finite value");
  return value;
}

long parse_integer(std::string_view field, const std::string& where) {
  long value = 0;
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw InputError(where + ": not an integer: '" + std::string(field) + "'");
  }
  return value;
}

std::vector<PointCloudFrame> read_point_cloud_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::string name = path.string();
  const std::size_t cf = table.column("frame", name);
  const std::size_t cp = table.column("point", name);
  const std::size_t cx = table.column("x", name);
  const std::size_t cy = table.column("y", name);
  const std::size_t cz = table.column("z", name);

  std::map<long, std::map<long, Eigen::RowVector3d>> frames;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string where = location(path, table.line_numbers[r]);
    const long frame = parse_integer(row[cf], where);
    const long point = parse_integer(row[cp], where);
    const Eigen::RowVector3d xyz(parse_double(row[cx], where), parse_double(row[cy], where),
                                 parse_double(row[cz], where));
    if (!frames[frame].emplace(point, xyz).second) {
      throw InputError(where + ": duplicate point " + std::to_string(point) + " in frame " +
                       std::to_string(frame));
    }
  }
  if (frames.empty()) throw InputError(name + ": no data rows");

  const auto& first = frames.begin()->second;
  std::vector<PointCloudFrame> out;
  out.reserve(frames.size());
  for (const auto& [index, points] : frames) {
    bool same = points.size() == first.size();
    for (auto a = points.begin(), b = first.begin(); same && a != points.end(); ++a, ++b) {
      same = a->first == b->first;
    }
    if (!same) {
      throw InputError(name + ": frame " + std::to_string(index) +
                       " does not carry the same point ids as frame " +
                       std::to_string(frames.begin()->first));
    }
    PointCloudFrame f;
    f.frame_index = index;
    f.points.resize(static_cast<Index>(points.size()), 3);
    Index i = 0;
    for (const auto& entry : points) f.points.row(i++) = entry.second;
    out.push_back(std::move(f));
  }
  return out;
}

LabeledSignal read_signal_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::string name = path.string();
  const std::size_t ct = table.column("t", name);
  const std::size_t cv = table.column("value", name);
  LabeledSignal out;
  out.series.samples.reserve(table.rows.size());
  out.labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = location(path, table.line_numbers[r]);
    const long t = parse_integer(table.rows[r][ct], where);
    if (!out.labels.empty() && t <= out.labels.back()) {
      throw InputError(where + ": t must be strictly increasing");
    }
    out.labels.push_back(t);
    out.series.samples.push_back(parse_double(table.rows[r][cv], where));
  }
  if (out.labels.empty()) throw InputError(name + ": no data rows");
  return out;
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const std::string where = location(path, number);
    std::vector<double> row;
    for (const std::string& f : split(line)) row.push_back(parse_double(f, where));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(where + ": expected " + std::to_string(rows.front().size()) +
                       " columns, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(path.string() + ": empty file");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::string shape_series_csv(const ShapeSeriesResult& result) {
  std::ostringstream os;
  os << "t,frame,mag1,mag2,mag2_orth,mag2_along,status\n";
  for (const SeriesStep& s : result.steps) {
    os << s.t << ',' << s.frame << ',' << format_number(s.mag1) << ',' << format_number(s.mag2)
       << ',' << format_number(s.mag2_orth) << ',' << format_number(s.mag2_along) << ','
       << to_string(s.status) << '\n';
  }
  return os.str();
}

std::string signal_scores_csv(const AnomalyReport& report, const std::vector<long>& labels) {
  std::ostringstream os;
  os << "t,score1,score2,score2_orth,score2_along,intersection_dim\n";
  for (const AnomalyStep& s : report.steps) {
    os << labels[static_cast<std::size_t>(s.t - 1)] << ',' << format_number(s.score1) << ','
       << format_number(s.score2) << ',' << format_number(s.score2_orth) << ','
       << format_number(s.score2_along) << ',' << s.intersection_dim << '\n';
  }
  return os.str();
}

std::string detections_csv(const AnomalyReport& report, const std::vector<long>& labels) {
  std::ostringstream os;
  os << "interval,start,end,peak,score_kind\n";
  std::size_t id = 0;
  for (const Interval& iv : report.intervals) {
    os << ++id << ',' << labels[static_cast<std::size_t>(iv.start - 1)] << ','
       << labels[static_cast<std::size_t>(iv.end - 1)] << ','
       << labels[static_cast<std::size_t>(iv.peak_t - 1)] << ',' << to_string(report.score) << '\n';
  }
  return os.str();
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_number(m(i, j));
    os << '\n';
  }
  return os.str();
}

std::string point_cloud_csv(const std::vector<PointCloudFrame>& frames) {
  std::ostringstream os;
  os << "frame,point,x,y,z\n";
  for (const PointCloudFrame& f : frames) {
    for (Index i = 0; i < f.points.rows(); ++i) {
      os << f.frame_index << ',' << i << ',' << format_number(f.points(i, 0)) << ','
         << format_number(f.points(i, 1)) << ',' << format_number(f.points(i, 2)) << '\n';
    }
  }
  return os.str();
}

std::string signal_csv(const SignalSeries& series) {
  std::ostringstream os;
  os << "t,value\n";
  for (Index t = 1; t <= series.size(); ++t) os << t << ',' << format_number(series.at(t)) << '\n';
  return os.str();
}

}  // namespace dsub::cli
