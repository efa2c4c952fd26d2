#include "acf/io.hpp"
#include "acf_cli/commands.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using acf::io::json;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result acf_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = acf::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(ACF_TEST_TMPDIR) / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_config(const std::string& name, const json& j) const {
    acf::io::write_json_atomic(dir_ / name, j);
    return path(name);
  }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

void expect_same_tree(const fs::path& a, const fs::path& b) {
  const auto names = listing(a);
  ASSERT_EQ(names, listing(b));
  for (const auto& n : names) EXPECT_TRUE(slurp(a / n) == slurp(b / n)) << n;
}

}  // namespace

TEST_F(Cli, SynthWritesRequestedScenes) {
  const auto cfg = write_config("c.json", {{"n_scenes", 10}, {"seed", 3}});
  const Result r = acf_run({"synth", "--config", cfg, "--out", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  int scenes = 0, preds = 0;
  for (const auto& n : listing(path("out"))) {
    scenes += n.rfind("scene_", 0) == 0;
    preds += n.rfind("pred_", 0) == 0;
  }
  EXPECT_EQ(scenes, 10);
  EXPECT_EQ(preds, 10);
  const json manifest = acf::io::read_json(path("out/synth_manifest.json"));
  EXPECT_EQ(manifest.at("scenes").size(), 10u);
  EXPECT_EQ(acf::io::read_json(path("out/pred_0007.json")).at("scene_id"), "scene_0007");
}

TEST_F(Cli, SameSeedSameBytes) {
  const auto cfg = write_config("c.json", {{"n_scenes", 3}, {"noise", {{"offset_sigma", 0.004}, {"outlier_fraction", 0.1}}}});
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--seed", "42", "--out", path("a")}).code, 0);
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--seed", "42", "--out", path("b")}).code, 0);
  expect_same_tree(path("a"), path("b"));
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--seed", "43", "--out", path("c")}).code, 0);
  EXPECT_NE(slurp(path("a/pred_0000.json")), slurp(path("c/pred_0000.json")));
}

TEST_F(Cli, JobsDoNotChangeOutputs) {
  const auto cfg = write_config("c.json", {{"n_scenes", 3}, {"noise", {{"offset_sigma", 0.004}}}});
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--out", path("s1"), "--jobs", "1"}).code, 0);
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--out", path("s2"), "--jobs", "2"}).code, 0);
  expect_same_tree(path("s1"), path("s2"));
  ASSERT_EQ(acf_run({"estimate", "--config", cfg, "--in", path("s1"), "--out", path("e1"), "--jobs", "1"}).code, 0);
  ASSERT_EQ(acf_run({"estimate", "--config", cfg, "--in", path("s1"), "--out", path("e2"), "--jobs", "2"}).code, 0);
  expect_same_tree(path("e1"), path("e2"));
}

TEST_F(Cli, ZeroNoisePipelineScoresPerfectly) {
  const auto cfg = write_config("c.json", {{"n_scenes", 3}, {"seed", 5}});
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--out", path("s")}).code, 0);
  for (const std::string method : {"endpoints", "vector", "scatterline"}) {
    const std::string est = path("e_" + method);
    const Result e = acf_run({"estimate", "--in", path("s"), "--out", est, "--axis-method", method});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(acf::io::read_json(est + "/estimate_report.json").at("failure_count"), 0);
    const Result v = acf_run({"evaluate", "--in", est, "--truth", path("s"), "--out", est});
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_NE(v.out.find("mAP"), std::string::npos);
    EXPECT_DOUBLE_EQ(acf::io::read_json(est + "/eval_report.json").at("mean_ap").get<double>(), 100.0) << method;
    EXPECT_EQ(slurp(est + "/eval_curve.csv").rfind("threshold_deg,threshold_cm,part_class,AP\n", 0), 0u);
  }
  ASSERT_EQ(acf_run({"associate", "--in", path("e_endpoints"), "--out", path("a")}).code, 0);
  const Result m = acf_run({"manip", "--in", path("a"), "--out", path("m")});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_TRUE(fs::exists(path("m/manip_0000.json")));
  EXPECT_TRUE(fs::exists(path("m/manip_report.json")));
}

TEST_F(Cli, ScatterLineFailureIsRecordedNotFatal) {
  const auto cfg = write_config("c.json", {{"n_scenes", 1}, {"seed", 8}});
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--out", path("s")}).code, 0);
  json bundle = acf::io::read_json(path("s/pred_0000.json"));
  json& roi = bundle["rois"][0];
  // Two masked seeds whose scatter votes land on the same point.
  const std::size_t n = roi["mask"].size();
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n && keep.size() < 2; ++i) {
    if (roi["seed_valid"][i].get<bool>() && roi["mask"][i].get<double>() > 0.5) keep.push_back(i);
  }
  ASSERT_EQ(keep.size(), 2u);
  for (std::size_t i = 0; i < n; ++i) roi["mask"][i] = (i == keep[0] || i == keep[1]) ? 1.0 : 0.0;
  for (std::size_t i : keep) {
    for (int k = 0; k < 3; ++k) {
      roi["scatter_offsets"][i][k] = 0.5 - roi["seed_point"][i][k].get<double>();
    }
  }
  fs::create_directories(path("bad"));
  acf::io::write_json_atomic(path("bad/pred_0000.json"), bundle);
  const Result r = acf_run({"estimate", "--in", path("bad"), "--out", path("e"), "--axis-method", "scatterline"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json report = acf::io::read_json(path("e/estimate_report.json"));
  EXPECT_EQ(report.at("failure_count"), 1);
  EXPECT_EQ(report.at("scenes")[0].at("failures")[0].at("error"), "RansacFailure");
}

TEST_F(Cli, LosscheckZeroAtTruth) {
  const auto cfg = write_config("c.json", {{"n_scenes", 1}, {"seed", 9}});
  ASSERT_EQ(acf_run({"synth", "--config", cfg, "--out", path("s")}).code, 0);
  const Result r = acf_run({"losscheck", "--in", path("s"), "--out", path("l")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json summary = acf::io::read_json(path("l/losscheck.json")).at("summary");
  for (const char* name : {"keypoint", "endpoint", "axis", "paf", "vector"}) {
    EXPECT_EQ(summary.at(name).at("max_abs_zero_at_truth").get<double>(), 0.0) << name;
  }
  EXPECT_EQ(summary.size(), 8u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(acf_run({"synth", "--help"}).code, 0);
  EXPECT_EQ(acf_run({}).code, 2);
  EXPECT_EQ(acf_run({"frobnicate"}).code, 2);
  EXPECT_EQ(acf_run({"synth", "--jobs", "0"}).code, 2);
  EXPECT_EQ(acf_run({"estimate", "--in", path("x"), "--axis-method", "ransac"}).code, 2);

  const auto unknown = write_config("unknown.json", {{"n_scenes", 1}, {"sead", 3}});
  const Result u = acf_run({"synth", "--config", unknown, "--out", path("o")});
  EXPECT_EQ(u.code, 2);
  EXPECT_NE(u.err.find("sead"), std::string::npos);
  const auto nested = write_config("nested.json", {{"estimator", {{"mean_shift", {{"bandwith", 0.1}}}}}});
  EXPECT_EQ(acf_run({"synth", "--config", nested, "--out", path("o")}).code, 2);
  const auto invalid = write_config("invalid.json", {{"n_scenes", -1}});
  EXPECT_EQ(acf_run({"synth", "--config", invalid, "--out", path("o")}).code, 2);

  EXPECT_EQ(acf_run({"synth", "--config", path("nope.json"), "--out", path("o")}).code, 1);
  EXPECT_EQ(acf_run({"estimate", "--in", path("nope"), "--out", path("o")}).code, 1);
  fs::create_directories(path("empty"));
  EXPECT_EQ(acf_run({"estimate", "--in", path("empty"), "--out", path("o")}).code, 1);

  fs::create_directories(path("schema"));
  acf::io::write_json_atomic(path("schema/pred_0000.json"), {{"format_version", 1}, {"kind", "predictions"}});
  EXPECT_EQ(acf_run({"estimate", "--in", path("schema"), "--out", path("o")}).code, 2);
  {
    std::ofstream(path("schema/pred_0001.json")) << "not json";
  }
  EXPECT_EQ(acf_run({"estimate", "--in", path("schema/pred_0001.json"), "--out", path("o")}).code, 2);
}
