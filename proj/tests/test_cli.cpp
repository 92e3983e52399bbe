#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "diffsub_cli/app.hpp"
#include "diffsub_cli/io.hpp"

namespace fs = std::filesystem;
using dsub::cli::run;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("diffsub_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int call(std::vector<std::string> args) {
    out_.str({});
    err_.str({});
    return run(args, out_, err_);
  }

  // Short two-tone signal, the second tone dominant, sized for a small SSA configuration.
  fs::path small_signal() {
    const fs::path p = dir_ / "sig.csv";
    EXPECT_EQ(call({"synth", "signal", "--output", p.string(), "--segment",
                    "sinusoid:length=200,frequency=0.03", "--segment",
                    "sinusoid:length=200,frequency=0.11,amplitude=10",
                    "--noise", "0.001", "--seed", "5"}),
              0)
        << err_.str();
    return p;
  }

  std::vector<std::string> small_signal_args(const fs::path& input, const fs::path& out) {
    return {"signal", "--input", input.string(), "--out-dir", out.string(), "--window", "30",
            "--num-windows", "40", "--dim", "2", "--tau", "8"};
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST_F(CliTest, NoArgumentsIsConfigError) { EXPECT_EQ(call({}), 2); }

TEST_F(CliTest, UnknownFlagIsConfigError) { EXPECT_EQ(call({"signal", "--bogus", "1"}), 2); }

TEST_F(CliTest, SynthSignalWritesTruthAndManifest) {
  const fs::path sig = small_signal();
  EXPECT_TRUE(fs::exists(sig));
  EXPECT_TRUE(fs::exists(dir_ / "sig.truth.json"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "sig.manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "synth signal");
  EXPECT_EQ(manifest["version"], "0.1.0");
  const auto truth = nlohmann::json::parse(slurp(dir_ / "sig.truth.json"));
  EXPECT_EQ(truth["boundaries"][0], 201);
  EXPECT_EQ(slurp(sig).substr(0, 8), "t,value\n");
}

TEST_F(CliTest, SignalOutputsAndDetections) {
  const fs::path sig = small_signal();
  auto args = small_signal_args(sig, dir_ / "out");
  args.insert(args.end(), {"--threshold", "0.1", "--plot"});
  ASSERT_EQ(call(args), 0) << err_.str();
  for (const char* f : {"signal_scores.csv", "detections.csv", "manifest.json", "signal_scores.svg",
                        "signal_components.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  const auto det = dsub::cli::read_csv(dir_ / "out" / "detections.csv");
  EXPECT_EQ(det.header, (std::vector<std::string>{"interval", "start", "end", "peak", "score_kind"}));
  ASSERT_EQ(det.rows.size(), 1u);
  const double peak = std::stod(det.rows[0][3]);
  EXPECT_LE(std::abs(peak - 201.0), 8.0);
}

TEST_F(CliTest, SignalRerunIsByteIdenticalAcrossThreadCounts) {
  const fs::path sig = small_signal();
  auto a = small_signal_args(sig, dir_ / "a");
  auto b = small_signal_args(sig, dir_ / "b");
  b.insert(b.end(), {"--threads", "3"});
  ASSERT_EQ(call(a), 0);
  ASSERT_EQ(call(b), 0);
  EXPECT_EQ(slurp(dir_ / "a" / "signal_scores.csv"), slurp(dir_ / "b" / "signal_scores.csv"));
}

TEST_F(CliTest, ManifestReplaysRun) {
  const fs::path sig = small_signal();
  ASSERT_EQ(call(small_signal_args(sig, dir_ / "a")), 0);
  ASSERT_EQ(call({"signal", "--config", (dir_ / "a" / "manifest.json").string(), "--out-dir",
                  (dir_ / "b").string()}),
            0)
      << err_.str();
  EXPECT_EQ(slurp(dir_ / "a" / "signal_scores.csv"), slurp(dir_ / "b" / "signal_scores.csv"));
}

TEST_F(CliTest, PrecedenceFlagOverEnvOverConfig) {
  const fs::path sig = small_signal();
  const fs::path cfg = dir_ / "run.cfg";
  spit(cfg, "# small run\nwindow = 30\nnum_windows = 40\ndim = 2\ntau = 6\n");
  const auto tau_of = [&](const fs::path& out) {
    const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
    return m["config"]["tau"].get<std::string>();
  };
  ASSERT_EQ(call({"signal", "--config", cfg.string(), "--input", sig.string(), "--out-dir",
                  (dir_ / "c").string()}),
            0);
  EXPECT_EQ(tau_of(dir_ / "c"), "6");

  ::setenv("DIFFSUB_SIGNAL_TAU", "7", 1);
  ASSERT_EQ(call({"signal", "--config", cfg.string(), "--input", sig.string(), "--out-dir",
                  (dir_ / "e").string()}),
            0);
  EXPECT_EQ(tau_of(dir_ / "e"), "7");
  ASSERT_EQ(call({"signal", "--config", cfg.string(), "--input", sig.string(), "--out-dir",
                  (dir_ / "f").string(), "--tau", "5"}),
            0);
  ::unsetenv("DIFFSUB_SIGNAL_TAU");
  EXPECT_EQ(tau_of(dir_ / "f"), "5");
}

TEST_F(CliTest, UnknownConfigKeyIsConfigError) {
  const fs::path cfg = dir_ / "bad.cfg";
  spit(cfg, "windowz = 3\n");
  EXPECT_EQ(call({"signal", "--config", cfg.string(), "--input", "x.csv", "--out-dir", dir_.string()}), 2);
  EXPECT_NE(err_.str().find("windowz"), std::string::npos);
}

TEST_F(CliTest, MalformedCsvReportsLineNumber) {
  const fs::path sig = dir_ / "bad.csv";
  spit(sig, "t,value\n1,0.5\n2,0.1,9\n");
  EXPECT_EQ(call(small_signal_args(sig, dir_ / "o")), 1);
  EXPECT_NE(err_.str().find("bad.csv:3"), std::string::npos) << err_.str();
}

TEST_F(CliTest, MissingColumnIsInputError) {
  const fs::path sig = dir_ / "nocol.csv";
  spit(sig, "t,z\n1,0.5\n");
  EXPECT_EQ(call(small_signal_args(sig, dir_ / "o")), 1);
  EXPECT_NE(err_.str().find("missing column 'value'"), std::string::npos) << err_.str();
}

TEST_F(CliTest, NonIncreasingTimeIsInputError) {
  const fs::path sig = dir_ / "order.csv";
  spit(sig, "t,value\n1,0.5\n1,0.2\n");
  EXPECT_EQ(call(small_signal_args(sig, dir_ / "o")), 1);
}

TEST_F(CliTest, InvalidParametersAreConfigErrors) {
  const fs::path sig = small_signal();
  auto args = small_signal_args(sig, dir_ / "o");
  args.insert(args.end(), {"--dim", "0"});
  EXPECT_EQ(call(args), 2);
  EXPECT_EQ(call({"synth", "signal", "--output", (dir_ / "x.csv").string(), "--segment", "wave:length=3"}), 2);
  auto too_long = small_signal_args(sig, dir_ / "o");
  too_long.insert(too_long.end(), {"--window", "390"});
  EXPECT_EQ(call(too_long), 2);
}

TEST_F(CliTest, ShapePipelineOnGeodesicRideIsFlat) {
  const fs::path pc = dir_ / "geo.csv";
  ASSERT_EQ(call({"synth", "geodesic-shape", "--output", pc.string(), "--points", "12", "--steps", "40",
                  "--seed", "2"}),
            0)
      << err_.str();
  ASSERT_EQ(call({"shape", "--input", pc.string(), "--out-dir", (dir_ / "s").string(), "--stride", "1",
                  "--plot"}),
            0)
      << err_.str();
  const auto table = dsub::cli::read_csv(dir_ / "s" / "shape_series.csv");
  const auto& mag2 = table.column("mag2", dir_ / "s" / "shape_series.csv");
  ASSERT_FALSE(table.rows.empty());
  for (const auto& row : table.rows) EXPECT_LE(std::abs(std::stod(row[mag2])), 1e-8);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "shape_magnitudes.svg"));
}

TEST_F(CliTest, DuplicatePointIdIsInputError) {
  const fs::path pc = dir_ / "dup.csv";
  spit(pc, "frame,point,x,y,z\n0,0,0,0,0\n0,0,1,1,1\n");
  EXPECT_EQ(call({"shape", "--input", pc.string(), "--out-dir", dir_.string()}), 1);
}

TEST_F(CliTest, SubspaceSixtyDegreeLines) {
  spit(dir_ / "a.csv", "1\n0\n");
  spit(dir_ / "b.csv", "0.5\n0.8660254037844386\n");
  ASSERT_EQ(call({"subspace", (dir_ / "a.csv").string(), (dir_ / "b.csv").string()}), 0) << err_.str();
  const std::string text = out_.str();
  EXPECT_NE(text.find("angle 1: 60.0000 deg"), std::string::npos) << text;
  EXPECT_NE(text.find("magnitude: 1"), std::string::npos) << text;
}

TEST_F(CliTest, SubspaceAmbientMismatchIsConfigError) {
  spit(dir_ / "a.csv", "1\n0\n");
  spit(dir_ / "b.csv", "1\n0\n0\n");
  EXPECT_NE(call({"subspace", (dir_ / "a.csv").string(), (dir_ / "b.csv").string()}), 0);
}
