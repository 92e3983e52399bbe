#include "diffsub_cli/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "diffsub_cli/io.hpp"

namespace dsub::cli {

const char* const kToolVersion = "0.1.0";

namespace {

constexpr double kWidth = 900;
constexpr double kHeight = 420;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::vector<double>& x,
                           const std::vector<PlotSeries>& series) {
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (double v : x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (const PlotSeries& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1;
  if (!std::isfinite(ymin)) ymin = 0, ymax = 1;
  ymin = std::min(ymin, 0.0);
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - (v - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kLeft) << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
     << escape(title) << "</text>\n";
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(yv) + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
       << format_number(yv) << "</text>\n";
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 18)
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
       << format_number(xv) << "</text>\n";
  }
  std::size_t c = 0;
  for (const PlotSeries& s : series) {
    const char* color = kColors[c % std::size(kColors)];
    std::string d;
    bool pen = false;
    const std::size_t n = std::min(x.size(), s.values.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.values[i])) {
        pen = false;
        continue;
      }
      d += (pen ? " L" : " M") + num(px(x[i])) + ' ' + num(py(s.values[i]));
      pen = true;
    }
    os << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.3\" d=\"" << d
       << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(c);
    os << "<line x1=\"" << num(kLeft + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(kLeft + pw + 32) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(kLeft + pw + 38) << "\" y=\"" << num(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.name) << "</text>\n";
    ++c;
  }
  os << "</svg>\n";
  return os.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "diffsub";
  j["version"] = kToolVersion;
  j["subcommand"] = m.subcommand;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [key, value] : m.config) config[key] = value;
  j["config"] = config;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& p : m.inputs) {
    inputs.push_back({{"path", p.string()},
                      {"bytes", std::filesystem::file_size(p)},
                      {"sha256", sha256_file(p)}});
  }
  j["inputs"] = inputs;
  j["outputs"] = m.outputs;
  j["warnings"] = m.warnings;
  char timing[96];
  std::snprintf(timing, sizeof timing, "started %s, duration %.3f s", m.started.c_str(),
                m.duration_seconds);
  j["timing"] = timing;
  return j.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace dsub::cli
