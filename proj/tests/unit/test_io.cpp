#include "acf/error.hpp"
#include "acf/io.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace acf;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "acf_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

PredictionBundle sample_bundle() {
  NoiseModel noise;
  noise.offset_sigma = 0.003;
  noise.paf_angle_sigma = 4.0;
  return emulate_predictions(generate_scene(random_scene_spec(12)), noise, 4);
}

}  // namespace

TEST(Io, AcfRoundTrip) {
  const Acf a(Vec3(0.1, -0.2, 0.3), Vec3(1, 2, 3));
  const Acf b = io::acf_from_json(io::to_json(a));
  EXPECT_EQ(a.keypoint(), b.keypoint());
  EXPECT_EQ(a.axis(), b.axis());
}

TEST(Io, SceneSpecRoundTrip) {
  const SceneSpec spec = random_scene_spec(3);
  const auto j = io::to_json(spec);
  EXPECT_EQ(io::to_json(io::scene_spec_from_json(j)), j);
}

TEST(Io, SceneRoundTrip) {
  const Scene s = generate_scene(random_scene_spec(4));
  const auto j = io::to_json(s);
  const Scene back = io::scene_from_json(j);
  EXPECT_EQ(back.part_labels, s.part_labels);
  EXPECT_EQ(back.parts.size(), s.parts.size());
  EXPECT_EQ(io::to_json(back), j);
}

TEST(Io, PredictionBundleRoundTrip) {
  const PredictionBundle b = sample_bundle();
  const auto j = io::to_json(b);
  const PredictionBundle back = io::bundle_from_json(j);
  ASSERT_EQ(back.rois.size(), b.rois.size());
  EXPECT_EQ(back.rois[0].keypoint_offsets.offsets, b.rois[0].keypoint_offsets.offsets);
  EXPECT_EQ(io::to_json(back), j);
}

TEST(Io, EstimatesAndAssociationRoundTrip) {
  const SceneEstimates est = estimate_scene(sample_bundle());
  const auto je = io::to_json(est);
  EXPECT_EQ(io::to_json(io::estimates_from_json(je)), je);
  const SceneAssociation assoc = associate_scene(est);
  const auto ja = io::to_json(assoc);
  EXPECT_EQ(io::to_json(io::association_from_json(ja)), ja);
}

TEST(Io, ManipulationAndEvaluationDocuments) {
  const auto plan = io::to_json(plan_manipulation(associate_scene(estimate_scene(sample_bundle()))));
  EXPECT_EQ(plan.at("kind"), "manipulation");
  EXPECT_EQ(plan.at("format_version"), kFormatVersion);
  const auto eval = io::to_json(EvalReport{});
  EXPECT_EQ(eval.at("kind"), "evaluation");
  EXPECT_EQ(eval.at("interpolation"), "all-point");
}

TEST(Io, FormatVersion) {
  auto j = io::to_json(random_scene_spec(1));
  EXPECT_NO_THROW(io::check_format_version(j));
  j["format_version"] = kFormatVersion + 1;
  EXPECT_EQ(code_of([&] { io::check_format_version(j); }), ErrorCode::SchemaViolation);
  j.erase("format_version");
  EXPECT_EQ(code_of([&] { io::scene_spec_from_json(j); }), ErrorCode::SchemaViolation);
}

TEST(Io, SchemaViolations) {
  auto j = io::to_json(sample_bundle());
  j["rois"][0].erase("mask");
  EXPECT_EQ(code_of([&] { io::bundle_from_json(j); }), ErrorCode::SchemaViolation);
  j = io::to_json(sample_bundle());
  j["rois"][0]["part_class"] = "lid";
  EXPECT_EQ(code_of([&] { io::bundle_from_json(j); }), ErrorCode::SchemaViolation);
  j = io::to_json(sample_bundle());
  j["rois"][0]["score"] = "high";
  EXPECT_EQ(code_of([&] { io::bundle_from_json(j); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([&] { io::acf_from_json(io::json{{"keypoint", {0, 0}}, {"axis", {0, 0, 1}}}); }),
            ErrorCode::SchemaViolation);
}

TEST(Io, NoiseModelRejectsUnknownKeys) {
  NoiseModel n;
  n.offset_sigma = 0.002;
  n.outlier_fraction = 0.1;
  auto j = io::to_json(n);
  EXPECT_EQ(io::noise_from_json(j).offset_sigma, 0.002);
  j["offset_sigm"] = 0.1;
  EXPECT_EQ(code_of([&] { io::noise_from_json(j); }), ErrorCode::SchemaViolation);
}

TEST(Io, FilesAndAtomicWrites) {
  const fs::path p = scratch("doc.json");
  io::write_json_atomic(p, io::to_json(random_scene_spec(2)));
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  EXPECT_EQ(io::read_json(p), io::to_json(random_scene_spec(2)));

  EXPECT_THROW(io::read_json(scratch("missing.json")), std::runtime_error);
  {
    std::ofstream(scratch("broken.json")) << "{\"format_version\": ";
  }
  EXPECT_EQ(code_of([&] { io::read_json(scratch("broken.json")); }), ErrorCode::SchemaViolation);
}
