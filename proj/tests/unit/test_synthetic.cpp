#include "acf/error.hpp"
#include "acf/io.hpp"
#include "acf/oracles.hpp"
#include "acf/synthetic.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace acf;
using acf::testing::angle_deg;
using acf::testing::Rng;

namespace {

SceneSpec single(ObjectClass c, double yaw_deg = 0.0, const Vec3& at = Vec3::Zero()) {
  SceneSpec spec;
  ObjectSpec o;
  o.object_class = c;
  o.pose.rotation = Eigen::AngleAxisd(yaw_deg * kRadPerDeg, Vec3::UnitZ()).toRotationMatrix();
  o.pose.translation = at;
  spec.objects.push_back(o);
  spec.camera.extrinsic = look_at(Vec3(0.45, 0.15, 0.4), Vec3(0, 0, 0.03));
  return spec;
}

const ScenePart& find_part(const Scene& s, PartClass c) {
  for (const auto& p : s.parts) {
    if (p.part_class == c) return p;
  }
  throw std::runtime_error("part missing");
}

Acf world(const Scene& s, const Acf& a) { return a.transformed(s.spec.camera.extrinsic); }

}  // namespace

TEST(GenerateScene, UprightMugAxesInWorldFrame) {
  const Scene s = generate_scene(single(ObjectClass::Mug));
  const Acf c = world(s, find_part(s, PartClass::Container).acf);
  EXPECT_LT((c.axis() - Vec3::UnitZ()).norm(), 1e-12);
  EXPECT_LT((c.keypoint() - Vec3(0, 0, PartDims{}.container_height / 2)).norm(), 1e-12);
  const Acf h = world(s, find_part(s, PartClass::Handle).acf);
  // The handle axis is horizontal and points back at the container axis.
  EXPECT_NEAR(h.axis().z(), 0.0, 1e-12);
  const Vec3 to_axis = Vec3(-h.keypoint().x(), -h.keypoint().y(), 0.0);
  EXPECT_LT(angle_deg(h.axis(), to_axis), 1e-9);
}

TEST(GenerateScene, YawRotatesGroundTruth) {
  const Vec3 at(0.05, -0.02, 0.0);
  const Scene a = generate_scene(single(ObjectClass::Spoon, 0.0, at));
  for (double yaw : {30.0, 135.0, 250.0}) {
    const Scene b = generate_scene(single(ObjectClass::Spoon, yaw, at));
    const Mat3 r = Eigen::AngleAxisd(yaw * kRadPerDeg, Vec3::UnitZ()).toRotationMatrix();
    ASSERT_EQ(a.parts.size(), b.parts.size());
    for (std::size_t i = 0; i < a.parts.size(); ++i) {
      const Acf wa = world(a, a.parts[i].acf), wb = world(b, b.parts[i].acf);
      EXPECT_LT((wb.keypoint() - (at + r * (wa.keypoint() - at))).norm(), 1e-12);
      EXPECT_LT((wb.axis() - r * wa.axis()).norm(), 1e-12);
    }
  }
}

TEST(GenerateScene, EndpointsBracketTheAxis) {
  const Scene s = generate_scene(random_scene_spec(3));
  for (const auto& p : s.parts) {
    const Vec3 d = p.endpoint2 - p.endpoint1;
    ASSERT_GT(d.norm(), 1e-6);
    EXPECT_LT(angle_deg(d, p.acf.axis()), 1e-9);
  }
}

TEST(GenerateScene, BottleDepthLiesOnTheCylinder) {
  const Scene s = generate_scene(single(ObjectClass::Bottle));
  const PartDims dims = s.spec.objects[0].dims;
  const CameraSpec& cam = s.spec.camera;
  int checked = 0;
  for (int v = 0; v < cam.height; v += 3) {
    for (int u = 0; u < cam.width; u += 3) {
      if (s.part_labels[static_cast<std::size_t>(v) * cam.width + u] != 0) continue;
      const Vec3 p = cam.extrinsic.apply(backproject(Vec2(u, v), s.depth.at(u, v), cam.intrinsics));
      const double radial = std::hypot(p.x(), p.y());
      const bool side = std::abs(radial - dims.container_radius) < 1e-9 && p.z() > -1e-9 &&
                        p.z() < dims.container_height + 1e-9;
      const bool cap = std::abs(p.z() - dims.container_height) < 1e-9 && radial < dims.container_radius + 1e-9;
      EXPECT_TRUE(side || cap) << u << "," << v;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
  EXPECT_EQ(s.parts[0].visible_pixels, std::count(s.part_labels.begin(), s.part_labels.end(), 0));
}

TEST(GenerateScene, InvalidSpecs) {
  SceneSpec spec = single(ObjectClass::Mug);
  spec.objects[0].dims.container_radius = -0.01;
  EXPECT_THROW(generate_scene(spec), Error);
  spec = single(ObjectClass::Mug);
  spec.gravity = Vec3(0, 0, -2);
  try {
    generate_scene(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidSpec);
  }
}

TEST(RandomSceneSpec, DeterministicAndBounded) {
  RandomSceneOptions opts;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SceneSpec a = random_scene_spec(seed, opts), b = random_scene_spec(seed, opts);
    EXPECT_EQ(io::to_json(a).dump(), io::to_json(b).dump());
    EXPECT_GE(static_cast<int>(a.objects.size()), opts.min_objects);
    EXPECT_LE(static_cast<int>(a.objects.size()), opts.max_objects);
  }
  EXPECT_NE(io::to_json(random_scene_spec(1)).dump(), io::to_json(random_scene_spec(2)).dump());
}

TEST(Emulator, ZeroNoiseOffsetsAreExact) {
  const Scene s = generate_scene(random_scene_spec(5));
  const PredictionBundle b = emulate_predictions(s, {}, 9);
  ASSERT_FALSE(b.rois.empty());
  for (const auto& r : b.rois) {
    const RoiTargets t = exact_targets(r);
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
      const Vec3 x = r.seeds.seeds[i].point3d;
      EXPECT_EQ(r.keypoint_offsets.offsets[i], t.keypoint_offsets.offsets[i]);
      EXPECT_LT((x + r.keypoint_offsets.offsets[i] - r.truth.acf.keypoint()).norm(), 1e-12);
      EXPECT_LT((x + r.endpoint_offsets.offsets[i][1] - r.truth.endpoint2).norm(), 1e-12);
      const Vec3 foot = x + r.scatter_offsets.offsets[i];
      EXPECT_LT(point_line_distance(foot, r.truth.endpoint1, r.truth.acf.axis()), 1e-12);
      EXPECT_NEAR((x - foot).dot(r.truth.acf.axis()), 0.0, 1e-12);
      EXPECT_EQ(r.axis_vectors[i], r.truth.acf.axis());
      EXPECT_EQ(r.paf[i], r.paf_target_star);
      EXPECT_FALSE(r.keypoint_outlier[i]);
      EXPECT_EQ(r.labels.labels_star[i], r.labels.logits[i] > 0.0 ? 1 : 0);
    }
  }
}

TEST(Emulator, GaussianMomentsMatchSigma) {
  const Scene s = generate_scene(random_scene_spec(6));
  NoiseModel noise;
  noise.offset_sigma = 0.01;
  std::vector<double> samples;
  for (std::uint64_t seed = 0; samples.size() < 30000; ++seed) {
    const PredictionBundle b = emulate_predictions(s, noise, seed);
    for (const auto& r : b.rois) {
      const RoiTargets t = exact_targets(r);
      for (std::size_t i = 0; i < r.seeds.size(); ++i) {
        const Vec3 e = r.keypoint_offsets.offsets[i] - t.keypoint_offsets.offsets[i];
        samples.insert(samples.end(), {e.x(), e.y(), e.z()});
      }
    }
  }
  double mean = 0.0, sq = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  for (double v : samples) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(samples.size() - 1));
  EXPECT_NEAR(sd, 0.01, 0.0005);
  EXPECT_LT(std::abs(mean), 0.0005);
}

TEST(Emulator, OutlierCountIsBinomial) {
  const Scene s = generate_scene(random_scene_spec(7));
  NoiseModel noise;
  noise.outlier_fraction = 0.2;
  const PredictionBundle b = emulate_predictions(s, noise, 11);
  std::size_t n = 0, k = 0;
  for (const auto& r : b.rois) {
    for (std::size_t i = 0; i < r.seeds.size(); ++i) {
      ++n;
      k += r.keypoint_outlier[i];
      if (!r.keypoint_outlier[i]) {
        EXPECT_LT((r.keypoint_offsets.offsets[i] - exact_targets(r).keypoint_offsets.offsets[i]).norm(), 1e-12);
      } else {
        const Vec3 d = r.seeds.seeds[i].point3d + r.keypoint_offsets.offsets[i] - r.truth.acf.keypoint();
        EXPECT_LE(d.cwiseAbs().maxCoeff(), noise.outlier_box / 2);
      }
    }
  }
  const double expect = 0.2 * static_cast<double>(n);
  const double sd = std::sqrt(static_cast<double>(n) * 0.2 * 0.8);
  EXPECT_LT(std::abs(static_cast<double>(k) - expect), 4.0 * sd);
}

TEST(Emulator, DeterministicPerSeed) {
  const Scene s = generate_scene(random_scene_spec(8));
  NoiseModel noise;
  noise.offset_sigma = 0.004;
  noise.outlier_fraction = 0.1;
  noise.paf_angle_sigma = 5.0;
  noise.mask_flip_prob = 0.05;
  const std::string a = io::to_json(emulate_predictions(s, noise, 21)).dump();
  EXPECT_EQ(a, io::to_json(emulate_predictions(s, noise, 21)).dump());
  EXPECT_NE(a, io::to_json(emulate_predictions(s, noise, 22)).dump());
}

TEST(Emulator, NoiseSweepsShareDraws) {
  // Doubling sigma doubles every inlier perturbation.
  const Scene s = generate_scene(random_scene_spec(9));
  NoiseModel n1, n2;
  n1.offset_sigma = 0.002;
  n2.offset_sigma = 0.004;
  const PredictionBundle a = emulate_predictions(s, n1, 3), b = emulate_predictions(s, n2, 3);
  ASSERT_EQ(a.rois.size(), b.rois.size());
  for (std::size_t r = 0; r < a.rois.size(); ++r) {
    const RoiTargets t = exact_targets(a.rois[r]);
    for (std::size_t i = 0; i < a.rois[r].seeds.size(); ++i) {
      const Vec3 ea = a.rois[r].keypoint_offsets.offsets[i] - t.keypoint_offsets.offsets[i];
      const Vec3 eb = b.rois[r].keypoint_offsets.offsets[i] - t.keypoint_offsets.offsets[i];
      EXPECT_LT((eb - 2.0 * ea).norm(), 1e-12);
    }
  }
}

TEST(Emulator, InvalidNoise) {
  const Scene s = generate_scene(single(ObjectClass::Bottle));
  NoiseModel noise;
  noise.outlier_fraction = 1.5;
  EXPECT_THROW(emulate_predictions(s, noise, 1), Error);
}

TEST(Oracles, KdeArgmaxExamples) {
  const std::vector<Vec3> one{Vec3(0.1, 0.2, 0.3)};
  EXPECT_LT((brute_force_kde_argmax(one, 0.03, 0.0015) - one[0]).norm(), 0.0015 * std::sqrt(3.0) / 2 + 1e-12);
  // Two clusters, the heavier one wins.
  std::vector<Vec3> two;
  for (int i = 0; i < 5; ++i) two.push_back(Vec3(0, 0, 0));
  for (int i = 0; i < 3; ++i) two.push_back(Vec3(0.5, 0, 0));
  EXPECT_LT(brute_force_kde_argmax(two, 0.03, 0.003).norm(), 0.003);
}

TEST(Oracles, AssignmentExamples) {
  const std::vector<AssociationCandidate> cands{{0, 10, 0.9}, {0, 11, 0.8}, {1, 10, 0.85}, {1, 11, 0.1}};
  const auto best = brute_force_assignment(cands);
  EXPECT_NEAR(total_score(best), 1.65, 1e-12);
  EXPECT_EQ(best.size(), 2u);
  EXPECT_TRUE(brute_force_assignment({}).empty());
  EXPECT_EQ(total_score({}), 0.0);
}
