#include "diffsub_cli/app.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "diffsub/grassmann.hpp"
#include "diffsub/shape.hpp"
#include "diffsub/ssa.hpp"
#include "diffsub/synthetic.hpp"
#include "diffsub_cli/io.hpp"
#include "diffsub_cli/report.hpp"
#include "diffsub_cli/synth_spec.hpp"

namespace dsub::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string env_name(const std::string& path, const std::string& flag) {
  std::string s = "DIFFSUB_" + path + "_" + flag;
  for (char& c : s) {
    c = (c == '-' || c == ' ') ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return s;
}

// Registers long options that also read DIFFSUB_<PATH>_<FLAG>.
class Options {
 public:
  Options(CLI::App* app, std::string path) : app_(app), path_(std::move(path)) {}

  template <class T>
  CLI::Option* add(const std::string& flag, T& target, const std::string& help) {
    return app_->add_option("--" + flag, target, help)
        ->capture_default_str()
        ->envname(env_name(path_, flag));
  }

  // Repeatable string option; the default is shown ';'-joined.
  CLI::Option* add(const std::string& flag, std::vector<std::string>& target,
                   const std::string& help) {
    std::string joined;
    for (std::size_t i = 0; i < target.size(); ++i) joined += (i ? ";" : "") + target[i];
    return app_->add_option("--" + flag, target, help)
        ->default_str(joined)
        ->envname(env_name(path_, flag));
  }

  CLI::Option* flag(const std::string& flag, bool& target, const std::string& help) {
    return app_->add_flag("--" + flag, target, help)->envname(env_name(path_, flag));
  }

  void config(std::string& sink) {
    app_->add_option("--config", sink,
                     "File of `key = value` lines (or a run manifest) supplying flag values");
  }

 private:
  CLI::App* app_;
  std::string path_;
};

bool is_multi(const CLI::Option* opt) { return opt->get_expected_max() > 1; }
bool is_flag(const CLI::Option* opt) { return opt->get_expected_min() == 0; }

// Resolved value of every option of `app`, for the manifest.
std::vector<std::pair<std::string, std::string>> resolved_config(const CLI::App* app) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() && !opt->get_positional()) continue;
    const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    std::string value;
    if (is_flag(opt)) {
      value = opt->count() > 0 && opt->as<bool>() ? "true" : "false";
    } else if (opt->count() > 0) {
      const auto& r = opt->results();
      if (is_multi(opt)) {
        for (std::size_t i = 0; i < r.size(); ++i) value += (i ? ";" : "") + r[i];
      } else {
        value = r.back();
      }
    } else {
      value = opt->get_default_str();
      if (value == "[]" || value == "{}") value.clear();

    }
    out.emplace_back(name, value);
  }
  return out;
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

std::string trim_copy(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key -> values, in file order. Manifest files contribute their "config"
// object, with multi-valued entries separated by ';'.
std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path,
                                                                  bool& from_manifest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<std::pair<std::string, std::string>> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  from_manifest = first != std::string::npos && text[first] == '{';
  if (from_manifest) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path.string() + ": invalid manifest JSON: " + e.what());
    }
    if (!j.contains("config") || !j["config"].is_object()) {
      throw ConfigError(path.string() + ": manifest has no config object");
    }
    for (const auto& [key, value] : j["config"].items()) {
      if (!value.is_string()) throw ConfigError(path.string() + ": config values must be strings");
      out.emplace_back(normalize_key(key), value.get<std::string>());
    }
    return out;
  }
  std::istringstream lines(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(lines, line)) {
    ++number;
    const std::string t = trim_copy(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(number) + ": expected key = value");
    }
    out.emplace_back(normalize_key(trim_copy(t.substr(0, eq))), trim_copy(t.substr(eq + 1)));
  }
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

// Splices config-file values into the argument list as `--key=value` right
// after the subcommand path, skipping keys given as flags or through the
// environment.
std::vector<std::string> apply_config(CLI::App& root, const std::vector<std::string>& args) {
  CLI::App* target = &root;
  std::size_t pos = 0;
  while (pos < args.size()) {
    CLI::App* sub = target->get_subcommand_no_throw(args[pos]);
    if (sub == nullptr) break;
    target = sub;
    ++pos;
  }
  std::optional<std::string> config;
  for (std::size_t i = pos; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) config = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) config = args[i].substr(9);
  }
  if (!config || target == &root) return args;

  bool from_manifest = false;
  const auto entries = read_config_file(*config, from_manifest);
  std::vector<std::string> injected;
  for (const auto& [key, value] : entries) {
    if (key == "config") continue;
    CLI::Option* opt = target->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "help") {
      const CLI::Option* positional = target->get_option_no_throw(key);
      if (from_manifest && positional != nullptr && positional->get_positional()) continue;
      throw ConfigError(*config + ": unknown key '" + key + "' for this subcommand");
    }
    const std::string flag = "--" + key;
    const bool on_command_line = std::any_of(args.begin() + static_cast<std::ptrdiff_t>(pos), args.end(),
                                             [&](const std::string& a) {
                                               return a == flag || a.rfind(flag + "=", 0) == 0;
                                             });
    const std::string env = opt->get_envname();
    if (on_command_line || (!env.empty() && std::getenv(env.c_str()) != nullptr)) continue;
    if (is_flag(opt)) {
      if (parse_bool(value, key)) injected.push_back(flag);
    } else if (is_multi(opt) && from_manifest) {
      std::size_t start = 0;
      while (start <= value.size() && !value.empty()) {
        auto semi = value.find(';', start);
        if (semi == std::string::npos) semi = value.size();
        injected.push_back(flag + "=" + value.substr(start, semi - start));
        start = semi + 1;
      }
    } else if (!value.empty()) {
      injected.push_back(flag + "=" + value);
    }
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(pos));
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(pos), args.end());
  return out;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << '\n';
}

struct RunState {
  const CLI::App* app = nullptr;
  std::string subcommand;
  std::string started;
  Clock::time_point clock;
};

RunManifest make_manifest(const RunState& state) {
  RunManifest m;
  m.subcommand = state.subcommand;
  m.config = resolved_config(state.app);
  m.started = state.started;
  return m;
}

void finish_manifest(RunManifest& m, const RunState& state, const fs::path& path) {
  m.duration_seconds = seconds_since(state.clock);
  write_text(path, manifest_json(m));
}

// ---------------------------------------------------------------- shape

struct ShapeArgs {
  std::string input;
  std::string out_dir;
  Index stride = 4;
  Index tau = 1;
  double delta = kDefaultDelta;
  bool plot = false;
  unsigned threads = 0;
};

int cmd_shape(const ShapeArgs& a, const RunState& state, std::ostream& out, std::ostream& err) {
  const std::vector<PointCloudFrame> frames = read_point_cloud_csv(a.input);
  if (frames.front().points.rows() < 4) {
    throw InputError(a.input + ": frames need at least four points, got " +
                     std::to_string(frames.front().points.rows()));
  }
  ShapeConfig config;
  config.stride = a.stride;
  config.tau = a.tau;
  config.delta = a.delta;
  config.threads = resolve_threads(a.threads);
  const ShapeSeriesResult result = analyze_shape_series(frames, config);

  const fs::path dir(a.out_dir);
  RunManifest manifest = make_manifest(state);
  manifest.inputs.push_back(a.input);
  write_text(dir / "shape_series.csv", shape_series_csv(result));
  manifest.outputs.push_back("shape_series.csv");
  if (a.plot) {
    std::vector<double> x;
    PlotSeries m1{"mag1", {}}, m2{"mag2", {}}, mo{"mag2_orth", {}}, ma{"mag2_along", {}};
    for (const SeriesStep& s : result.steps) {
      x.push_back(static_cast<double>(s.frame));
      m1.values.push_back(s.mag1);
      m2.values.push_back(s.mag2);
      mo.values.push_back(s.mag2_orth);
      ma.values.push_back(s.mag2_along);
    }
    write_text(dir / "shape_magnitudes.svg",
               line_chart_svg("First/second-order difference subspace magnitudes", x, {m1, m2}));
    write_text(dir / "shape_components.svg",
               line_chart_svg("Second-order magnitude components", x, {m2, mo, ma}));
    manifest.outputs.push_back("shape_magnitudes.svg");
    manifest.outputs.push_back("shape_components.svg");
  }
  manifest.warnings = result.warnings;
  report_warnings(result.warnings, err);
  finish_manifest(manifest, state, dir / "manifest.json");
  out << "shape: " << frames.size() << " frames, " << result.steps.size() << " steps written to "
      << (dir / "shape_series.csv").string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------- signal

struct SignalArgs {
  std::string input;
  std::string out_dir;
  Index window = 100;
  Index num_windows = 220;
  Index dim = 40;
  Index tau = 16;
  double delta = kDefaultDelta;
  std::string threshold = "none";
  std::string score = "first";
  Index step = 1;
  bool plot = false;
  unsigned threads = 0;
};

std::optional<ThresholdRule> parse_threshold(const std::string& text) {
  if (text == "none" || text.empty()) return std::nullopt;
  ThresholdRule rule;
  std::string number = text;
  if (text.rfind("auto:", 0) == 0) {
    rule.kind = ThresholdRule::Kind::MedianMultiple;
    number = text.substr(5);
  }
  char* end = nullptr;
  rule.value = std::strtod(number.c_str(), &end);
  if (number.empty() || end != number.c_str() + number.size() || !std::isfinite(rule.value) ||
      rule.value < 0.0) {
    throw ConfigError("--threshold: expected a non-negative number, auto:<k> or none, got '" +
                      text + "'");
  }
  return rule;
}

int cmd_signal(const SignalArgs& a, const RunState& state, std::ostream& out, std::ostream& err) {
  SsaConfig config;
  config.window_width = a.window;
  config.num_windows = a.num_windows;
  config.subspace_dim = a.dim;
  config.lag = a.tau;
  config.delta = a.delta;
  config.step = a.step;
  config.threshold = parse_threshold(a.threshold);
  config.score = a.score == "second" ? ScoreKind::Second : ScoreKind::First;
  config.threads = resolve_threads(a.threads);
  validate(config);

  const LabeledSignal signal = read_signal_csv(a.input);
  const Index needed = min_series_length(config);
  if (signal.series.size() < needed) {
    throw ConfigError("series too short: " + std::to_string(signal.series.size()) +
                      " samples, need at least " + std::to_string(needed) +
                      " (window + num-windows - 1 + 2 * tau)");
  }
  std::vector<std::string> warnings;
  for (std::size_t i = 1; i < signal.labels.size(); ++i) {
    if (signal.labels[i] != signal.labels[i - 1] + 1) {
      warnings.push_back("t is not evenly spaced (first gap after t = " +
                         std::to_string(signal.labels[i - 1]) + "); samples are used in order");
      break;
    }
  }
  const AnomalyReport report = sliding_analysis(signal.series, config);
  warnings.insert(warnings.end(), report.warnings.begin(), report.warnings.end());

  const fs::path dir(a.out_dir);
  RunManifest manifest = make_manifest(state);
  manifest.inputs.push_back(a.input);
  write_text(dir / "signal_scores.csv", signal_scores_csv(report, signal.labels));
  write_text(dir / "detections.csv", detections_csv(report, signal.labels));
  manifest.outputs = {"signal_scores.csv", "detections.csv"};
  if (a.plot) {
    std::vector<double> x;
    PlotSeries s1{"score1", {}}, s2{"score2", {}}, so{"score2_orth", {}}, sa{"score2_along", {}};
    PlotSeries th{"threshold", {}};
    for (const AnomalyStep& s : report.steps) {
      x.push_back(static_cast<double>(signal.labels[static_cast<std::size_t>(s.t - 1)]));
      s1.values.push_back(s.score1);
      s2.values.push_back(s.score2);
      so.values.push_back(s.score2_orth);
      sa.values.push_back(s.score2_along);
      th.values.push_back(report.threshold.value_or(std::nan("")));
    }
    std::vector<PlotSeries> scores{s1, s2};
    if (report.threshold) scores.push_back(th);
    write_text(dir / "signal_scores.svg", line_chart_svg("Anomaly scores", x, scores));
    write_text(dir / "signal_components.svg",
               line_chart_svg("Second-order score components", x, {s2, so, sa}));
    manifest.outputs.push_back("signal_scores.svg");
    manifest.outputs.push_back("signal_components.svg");
  }
  manifest.warnings = warnings;
  report_warnings(warnings, err);
  finish_manifest(manifest, state, dir / "manifest.json");

  out << "signal: " << report.steps.size() << " steps written to "
      << (dir / "signal_scores.csv").string() << '\n';
  if (!report.threshold) {
    out << "no threshold given; detection skipped\n";
  } else {
    out << "threshold " << format_number(*report.threshold) << " on score " << to_string(report.score)
        << ": " << report.intervals.size() << " interval(s)\n";
    for (std::size_t i = 0; i < report.intervals.size(); ++i) {
      const Interval& iv = report.intervals[i];
      out << "interval " << i + 1 << ": t " << signal.labels[static_cast<std::size_t>(iv.start - 1)]
          << ".." << signal.labels[static_cast<std::size_t>(iv.end - 1)] << ", peak "
          << format_number(iv.peak) << " at t " << signal.labels[static_cast<std::size_t>(iv.peak_t - 1)]
          << '\n';
    }
  }
  return kOk;
}

// ---------------------------------------------------------------- synth

fs::path sidecar(const fs::path& output, const std::string& suffix) {
  fs::path p = output;
  p.replace_extension();
  p += suffix;
  return p;
}

const std::vector<std::string> kDefaultSegments = {
    "harmonic:length=2000,period=50,amplitude=1",
    "harmonic:length=2000,period=70,amplitude=2",
};

struct SynthSignalArgs {
  std::string output;
  std::vector<std::string> segments = kDefaultSegments;
  std::vector<std::string> bursts;
  double noise = 0.0;
  std::uint64_t seed = 0;
};

int cmd_synth_signal(const SynthSignalArgs& a, const RunState& state, std::ostream& out) {
  const std::vector<std::string>& texts = a.segments;
  std::vector<synth::SignalSegment> segments;
  for (const std::string& t : texts) segments.push_back(parse_segment(t));
  std::vector<synth::ChirpBurst> bursts;
  for (const std::string& t : a.bursts) bursts.push_back(parse_burst(t));
  if (!(a.noise >= 0.0)) throw ConfigError("--noise must be non-negative");
  synth::GeneratedSignal g;
  try {
    g = synth::gen_signal(segments, bursts, a.noise, a.seed);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }

  nlohmann::ordered_json truth;
  truth["generator"] = "signal";
  truth["seed"] = a.seed;
  truth["noise_sd"] = a.noise;
  truth["length"] = g.series.size();
  truth["segments"] = texts;
  truth["boundaries"] = g.boundaries;
  nlohmann::ordered_json bj = nlohmann::ordered_json::array();
  for (const auto& [onset, offset] : g.bursts) bj.push_back({{"onset", onset}, {"offset", offset}});
  truth["bursts"] = bj;

  const fs::path output(a.output);
  write_text(output, signal_csv(g.series));
  write_text(sidecar(output, ".truth.json"), truth.dump(2) + "\n");
  RunManifest manifest = make_manifest(state);
  manifest.outputs = {output.filename().string(), sidecar(output, ".truth.json").filename().string()};
  finish_manifest(manifest, state, sidecar(output, ".manifest.json"));
  out << "synth signal: " << g.series.size() << " samples written to " << output.string() << '\n';
  return kOk;
}

struct SynthShapeArgs {
  std::string output;
  Index points = 20;
  Index frames = 200;
  double joint_base = 0.6;
  double joint_amplitude = 0.3;
  double joint_period = 40.0;
  double rotation_rate = 0.0;
  std::uint64_t seed = 0;
};

int cmd_synth_shape(const SynthShapeArgs& a, const RunState& state, std::ostream& out) {
  synth::MotionSpec spec;
  spec.num_points = a.points;
  spec.num_frames = a.frames;
  spec.joint_base = a.joint_base;
  spec.joint_amplitude = a.joint_amplitude;
  spec.joint_period = a.joint_period;
  spec.global_rotation_rate = a.rotation_rate;
  spec.seed = a.seed;
  std::vector<PointCloudFrame> frames;
  try {
    frames = synth::gen_point_cloud_motion(spec);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  nlohmann::ordered_json truth;
  truth["generator"] = "shape";
  truth["seed"] = a.seed;
  truth["points"] = a.points;
  truth["frames"] = a.frames;
  truth["joint_base"] = a.joint_base;
  truth["joint_amplitude"] = a.joint_amplitude;
  truth["joint_period"] = a.joint_period;
  truth["rotation_rate"] = a.rotation_rate;

  const fs::path output(a.output);
  write_text(output, point_cloud_csv(frames));
  write_text(sidecar(output, ".truth.json"), truth.dump(2) + "\n");
  RunManifest manifest = make_manifest(state);
  manifest.outputs = {output.filename().string(), sidecar(output, ".truth.json").filename().string()};
  finish_manifest(manifest, state, sidecar(output, ".manifest.json"));
  out << "synth shape: " << frames.size() << " frames written to " << output.string() << '\n';
  return kOk;
}

struct SynthGeodesicArgs {
  std::string output;
  Index points = 20;
  Index steps = 100;
  double step_length = 0.01;
  std::string speed = "constant";
  double off_geodesic = 0.0;
  std::uint64_t seed = 0;
};

int cmd_synth_geodesic(const SynthGeodesicArgs& a, const RunState& state, std::ostream& out) {
  synth::TrajectorySpec spec;
  spec.ambient_dim = a.points - 1;
  spec.subspace_dim = 3;
  spec.num_steps = a.steps;
  spec.step_length = a.step_length;
  spec.speed = parse_speed(a.speed);
  spec.off_geodesic_amplitude = a.off_geodesic;
  spec.seed = a.seed;
  const synth::GeodesicTrajectory traj = [&] {
    try {
      return synth::gen_geodesic_trajectory(spec);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }();
  const std::vector<PointCloudFrame> frames = point_clouds_from_trajectory(traj);

  nlohmann::ordered_json truth;
  truth["generator"] = "geodesic-shape";
  truth["seed"] = a.seed;
  truth["points"] = a.points;
  truth["steps"] = a.steps;
  truth["step_length"] = a.step_length;
  truth["speed"] = a.speed;
  truth["off_geodesic"] = a.off_geodesic;
  truth["positions"] = traj.positions;

  const fs::path output(a.output);
  write_text(output, point_cloud_csv(frames));
  write_text(sidecar(output, ".truth.json"), truth.dump(2) + "\n");
  RunManifest manifest = make_manifest(state);
  manifest.outputs = {output.filename().string(), sidecar(output, ".truth.json").filename().string()};
  finish_manifest(manifest, state, sidecar(output, ".manifest.json"));
  out << "synth geodesic-shape: " << frames.size() << " frames written to " << output.string()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------- subspace

struct SubspaceArgs {
  std::vector<std::string> files;
  double delta = kDefaultDelta;
  std::string out_dir;
};

std::string degrees(double radians) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", radians * 180.0 / M_PI);
  return buf;
}

Subspace load_basis(const std::string& path, std::vector<std::string>& warnings) {
  const Matrix m = read_matrix_csv(path);
  const Subspace s = orthonormalize(m);
  if (s.dim() < m.cols()) {
    warnings.push_back(path + ": basis has rank " + std::to_string(s.dim()) + " < " +
                       std::to_string(m.cols()) + " columns");
  }
  if (s.is_trivial()) throw InputError(path + ": basis is zero");
  return s;
}

int cmd_subspace(const SubspaceArgs& a, const RunState& state, std::ostream& out,
                 std::ostream& err) {
  if (!(a.delta > 0.0 && a.delta < 0.5)) throw ConfigError("--delta must lie in (0, 0.5)");
  std::vector<std::string> warnings;
  std::vector<Subspace> s;
  for (const std::string& f : a.files) s.push_back(load_basis(f, warnings));
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i].ambient_dim() != s[0].ambient_dim()) {
      throw InputError(a.files[i] + ": ambient dimension " + std::to_string(s[i].ambient_dim()) +
                       " differs from " + std::to_string(s[0].ambient_dim()));
    }
  }
  const Subspace& s1 = s[0];
  const Subspace& s2 = s[1];
  std::map<std::string, Matrix> bases;

  out << "ambient dimension: " << s1.ambient_dim() << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << "dim " << a.files[i] << ": " << s[i].dim() << '\n';
  }
  const CanonicalStructure cs = canonical_structure(s1, s2);
  out << "canonical angles (" << a.files[0] << ", " << a.files[1] << "):\n";
  for (Index i = 0; i < cs.size(); ++i) {
    out << "  angle " << i + 1 << ": " << degrees(cs.angles[i]) << " deg\n";
  }
  out << "intersection rank: " << cs.intersection_rank << '\n';
  out << "magnitude: " << format_number(magnitude(s1, s2, a.delta)) << '\n';
  if (s1.dim() == s2.dim()) {
    out << "geodesic distance: " << format_number(geodesic_distance(s1, s2)) << '\n';
  }

  bases["difference"] = difference_subspace(s1, s2, a.delta).basis();
  bases["principal"] = principal_component_subspace(s1, s2).basis();
  bases["sum"] = sum_subspace(s1, s2).basis();
  try {
    const DecompositionResult d = analytic_decompose(s1, s2, a.delta);
    out << "decomposition (delta " << format_number(a.delta) << "): D " << d.difference.dim()
        << ", M " << d.principal.dim() << ", I " << d.intersection.dim() << ", Z "
        << d.residual_z.dim() << '\n';
    bases["intersection"] = d.intersection.basis();
    bases["residual_z"] = d.residual_z.basis();
  } catch (const InconsistencyError& e) {
    warnings.push_back(std::string("eigen-band decomposition: ") + e.what());
    out << "decomposition (delta " << format_number(a.delta) << "): D "
        << e.geometric_difference().dim() << ", M " << e.geometric_principal().dim()
        << " (eigen-band route inconsistent)\n";
  }

  if (s1.dim() != s2.dim()) {
    const bool first_smaller = s1.dim() < s2.dim();
    const Subspace& small = first_smaller ? s1 : s2;
    const Subspace& large = first_smaller ? s2 : s1;
    try {
      const Projection p = subspace_project(small, large);
      out << "projection of " << a.files[first_smaller ? 0 : 1] << " into "
          << a.files[first_smaller ? 1 : 0] << ": distance "
          << format_number(geodesic_distance(small, p.subspace))
          << (p.non_unique ? " (not unique)" : "") << '\n';
      bases["projection"] = p.subspace.basis();
    } catch (const ProjectionIllDefined& e) {
      warnings.push_back(e.what());
    }
  }

  if (s.size() == 3) {
    const Subspace& s3 = s[2];
    out << "second-order magnitude: " << format_number(second_order_magnitude(s1, s2, s3, a.delta))
        << '\n';
    bases["second_order_difference"] = second_order_difference_subspace(s1, s2, s3, a.delta).basis();
    if (s1.dim() == s2.dim() && s2.dim() == s3.dim()) {
      try {
        const MagnitudeReport r = magnitude_decomposition(s1, s2, s3, a.delta);
        out << "  orthogonal component: " << format_number(r.orthogonal_component) << '\n';
        out << "  along component: " << format_number(r.along_component) << '\n';
        out << "  residual: " << format_number(r.residual) << '\n';
      } catch (const ProjectionIllDefined& e) {
        warnings.push_back(e.what());
      }
    }
  }
  report_warnings(warnings, err);

  if (!a.out_dir.empty()) {
    const fs::path dir(a.out_dir);
    RunManifest manifest = make_manifest(state);
    for (const std::string& f : a.files) manifest.inputs.push_back(f);
    for (const auto& [name, basis] : bases) {
      write_text(dir / (name + ".csv"), matrix_csv(basis));
      manifest.outputs.push_back(name + ".csv");
    }
    manifest.warnings = warnings;
    finish_manifest(manifest, state, dir / "manifest.json");
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Difference subspaces of moving subspaces: shape and signal pipelines", "diffsub"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::string config_sink;

  ShapeArgs shape;
  CLI::App* shape_cmd = app.add_subcommand("shape", "Magnitude series of point-cloud shape subspaces");
  {
    Options o(shape_cmd, "SHAPE");
    o.add("input", shape.input, "Point cloud CSV (frame,point,x,y,z)")->required();
    o.add("out-dir", shape.out_dir, "Output directory")->required();
    o.add("stride", shape.stride, "Use every stride-th frame")->check(CLI::PositiveNumber);
    o.add("tau", shape.tau, "Lag on the strided sequence")->check(CLI::PositiveNumber);
    o.add("delta", shape.delta, "Canonical pair gap threshold");
    o.flag("plot", shape.plot, "Write SVG line plots");
    o.add("threads", shape.threads, "Worker threads (0 = all cores)");
    o.config(config_sink);
  }

  SignalArgs signal;
  CLI::App* signal_cmd = app.add_subcommand("signal", "SSA difference-subspace anomaly scores");
  {
    Options o(signal_cmd, "SIGNAL");
    o.add("input", signal.input, "Signal CSV (t,value)")->required();
    o.add("out-dir", signal.out_dir, "Output directory")->required();
    o.add("window", signal.window, "Window width w");
    o.add("num-windows", signal.num_windows, "Number of windows M");
    o.add("dim", signal.dim, "Signal subspace dimension");
    o.add("tau", signal.tau, "Lag between compared subspaces");
    o.add("delta", signal.delta, "Canonical pair gap threshold");
    o.add("threshold", signal.threshold, "Detection threshold: <value>, auto:<k> (k x median) or none");
    o.add("score", signal.score, "Score driving detection")
        ->check(CLI::IsMember({"first", "second"}));
    o.add("step", signal.step, "Evaluate every step-th t");
    o.flag("plot", signal.plot, "Write SVG line plots");
    o.add("threads", signal.threads, "Worker threads (0 = all cores)");
    o.config(config_sink);
  }

  CLI::App* synth_cmd = app.add_subcommand("synth", "Synthetic inputs with ground truth");
  synth_cmd->require_subcommand(1);

  SynthSignalArgs synth_signal;
  CLI::App* synth_signal_cmd = synth_cmd->add_subcommand("signal", "Piecewise signal with chirp bursts");
  {
    Options o(synth_signal_cmd, "SYNTH_SIGNAL");
    o.add("output", synth_signal.output, "Output CSV (t,value)")->required();
    o.add("segment", synth_signal.segments,
          "Segment kind:key=value,... (sinusoid, harmonic, constant); repeatable");
    o.add("burst", synth_signal.bursts, "Chirp burst start=..,length=..,amplitude=..,f0=..,f1=..");
    o.add("noise", synth_signal.noise, "Gaussian noise standard deviation");
    o.add("seed", synth_signal.seed, "Random seed");
    o.config(config_sink);
  }

  SynthShapeArgs synth_shape;
  CLI::App* synth_shape_cmd = synth_cmd->add_subcommand("shape", "Two-segment articulated point cloud");
  {
    Options o(synth_shape_cmd, "SYNTH_SHAPE");
    o.add("output", synth_shape.output, "Output CSV (frame,point,x,y,z)")->required();
    o.add("points", synth_shape.points, "Number of points");
    o.add("frames", synth_shape.frames, "Number of frames");
    o.add("joint-base", synth_shape.joint_base, "Mean hinge angle (rad)");
    o.add("joint-amplitude", synth_shape.joint_amplitude, "Hinge angle amplitude (rad)");
    o.add("joint-period", synth_shape.joint_period, "Hinge period (frames)");
    o.add("rotation-rate", synth_shape.rotation_rate, "Global rotation per frame (rad)");
    o.add("seed", synth_shape.seed, "Random seed");
    o.config(config_sink);
  }

  SynthGeodesicArgs synth_geo;
  CLI::App* synth_geo_cmd =
      synth_cmd->add_subcommand("geodesic-shape", "Point clouds whose shape subspaces ride a geodesic");
  {
    Options o(synth_geo_cmd, "SYNTH_GEODESIC_SHAPE");
    o.add("output", synth_geo.output, "Output CSV (frame,point,x,y,z)")->required();
    o.add("points", synth_geo.points, "Number of points (ambient dimension + 1)");
    o.add("steps", synth_geo.steps, "Number of frames");
    o.add("step-length", synth_geo.step_length, "Geodesic parameter advance per frame");
    o.add("speed", synth_geo.speed, "constant | sinusoidal:amplitude=..,period=.. | piecewise:step=factor,...");
    o.add("off-geodesic", synth_geo.off_geodesic, "Off-geodesic perturbation amplitude (rad)");
    o.add("seed", synth_geo.seed, "Random seed");
    o.config(config_sink);
  }

  SubspaceArgs subspace;
  CLI::App* subspace_cmd =
      app.add_subcommand("subspace", "Canonical angles and difference subspaces of basis CSVs");
  {
    Options o(subspace_cmd, "SUBSPACE");
    subspace_cmd->add_option("files", subspace.files, "Two or three headerless basis CSVs (n x d)")
        ->required()
        ->expected(2, 3);
    o.add("delta", subspace.delta, "Canonical pair gap threshold");
    o.add("out-dir", subspace.out_dir, "Write bases and a manifest here");
    o.config(config_sink);
  }

  try {
    std::vector<std::string> argv = apply_config(app, args);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  }

  RunState state;
  state.started = utc_timestamp();
  state.clock = Clock::now();
  try {
    if (shape_cmd->parsed()) {
      state.app = shape_cmd;
      state.subcommand = "shape";
      return cmd_shape(shape, state, out, err);
    }
    if (signal_cmd->parsed()) {
      state.app = signal_cmd;
      state.subcommand = "signal";
      return cmd_signal(signal, state, out, err);
    }
    if (synth_signal_cmd->parsed()) {
      state.app = synth_signal_cmd;
      state.subcommand = "synth signal";
      return cmd_synth_signal(synth_signal, state, out);
    }
    if (synth_shape_cmd->parsed()) {
      state.app = synth_shape_cmd;
      state.subcommand = "synth shape";
      return cmd_synth_shape(synth_shape, state, out);
    }
    if (synth_geo_cmd->parsed()) {
      state.app = synth_geo_cmd;
      state.subcommand = "synth geodesic-shape";
      return cmd_synth_geodesic(synth_geo, state, out);
    }
    if (subspace_cmd->parsed()) {
      state.app = subspace_cmd;
      state.subcommand = "subspace";
      return cmd_subspace(subspace, state, out, err);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kBadInput;
  }
  return kBadConfig;
}

}  // namespace dsub::cli
