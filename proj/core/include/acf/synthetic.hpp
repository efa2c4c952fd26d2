#pragma once

// Synthetic scenes built from parametric primitives, rendered by analytic
// ray casting, plus an emulator standing in for the network heads.

#include "acf/camera.hpp"
#include "acf/fields.hpp"
#include "acf/taxonomy.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acf {

// Dimensions of every primitive an object may use; each object class reads
// only the fields for its own parts.
struct PartDims {
  double container_radius = 0.035;
  double container_height = 0.10;
  double handle_major_radius = 0.022;  // torus centerline radius
  double handle_minor_radius = 0.006;  // tube radius
  double stir_length = 0.12;
  double stir_width = 0.016;
  double stir_thickness = 0.008;
  double scoop_half_length = 0.028;
  double scoop_half_width = 0.02;
  double scoop_depth = 0.012;

  void validate() const;
};

struct ObjectSpec {
  ObjectClass object_class = ObjectClass::Mug;
  RigidTransform pose;  // object -> world
  PartDims dims;
};

struct CameraSpec {
  CameraIntrinsics intrinsics{600.0, 600.0, 320.0, 240.0};
  int width = 640;
  int height = 480;
  RigidTransform extrinsic;  // camera -> world (x right, y down, z forward)
};

struct SceneSpec {
  std::string scene_id = "scene";
  std::vector<ObjectSpec> objects;
  CameraSpec camera;
  Vec3 gravity = -Vec3::UnitZ();  // world frame
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Camera pose looking from `eye` at `target` with world +z up.
RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up = Vec3::UnitZ());

struct ScenePart {
  PartClass part_class = PartClass::Container;
  std::size_t object_index = 0;
  Acf acf{Vec3::Zero(), Vec3::UnitZ()};  // camera frame
  Vec3 endpoint1 = Vec3::Zero();         // camera frame, axis tail
  Vec3 endpoint2 = Vec3::Zero();         // camera frame, axis head
  int visible_pixels = 0;
};

struct Scene {
  SceneSpec spec;
  DepthImage depth;
  std::vector<int> part_labels;  // row-major; index into `parts` or -1
  std::vector<ScenePart> parts;
};

/// Instantiates primitives, computes ground-truth ACFs and renders depth.
/// Throws InvalidSpec.
Scene generate_scene(const SceneSpec& spec);

struct RandomSceneOptions {
  int min_objects = 2;
  int max_objects = 5;
  std::vector<ObjectClass> classes{kAllObjectClasses.begin(), kAllObjectClasses.end()};
  double workspace_half_extent = 0.22;  // meters, around the world origin
  double dims_jitter = 0.15;            // relative
};

/// Tabletop clutter: objects at random non-overlapping positions and yaw,
/// viewed obliquely from above.
SceneSpec random_scene_spec(std::uint64_t seed, const RandomSceneOptions& options = {},
                            const std::string& scene_id = "scene");

struct NoiseModel {
  double offset_sigma = 0.0;      // meters
  double outlier_fraction = 0.0;  // [0, 1]
  double outlier_box = 0.5;       // meters, cube side centered at the target
  double paf_angle_sigma = 0.0;   // degrees
  double mask_flip_prob = 0.0;    // [0, 1]
  double vector_sigma = 0.0;      // per-component noise on axis vectors

  void validate() const;
};

struct EmulationConfig {
  int grid_n = kDefaultSeedGridSide;
  int min_masked_seeds = 8;
};

struct RoiTruth {
  Acf acf{Vec3::Zero(), Vec3::UnitZ()};
  Vec3 endpoint1 = Vec3::Zero();
  Vec3 endpoint2 = Vec3::Zero();
  std::size_t object_index = 0;
  std::size_t scene_part = 0;
};

struct RoiPrediction {
  PartClass part_class = PartClass::Container;
  double score = 1.0;
  Roi roi;
  SeedGrid seeds;
  MaskWeights mask;
  OffsetField keypoint_offsets;
  EndpointOffsetField endpoint_offsets;
  std::vector<Vec3> axis_vectors;
  OffsetField scatter_offsets;
  LabelPrediction labels;
  std::vector<Vec2> paf;
  Vec2 paf_target_star = Vec2::UnitX();
  std::vector<bool> keypoint_outlier;
  RoiTruth truth;
};

struct PredictionBundle {
  std::string scene_id;
  CameraSpec camera;
  Vec3 gravity = -Vec3::UnitZ();
  std::vector<RoiPrediction> rois;
};

/// One ROI per part with at least `min_masked_seeds` on-part seeds. Offsets
/// are exact at zero noise, then perturbed per `noise`.
PredictionBundle emulate_predictions(const Scene& scene, const NoiseModel& noise,
                                     std::uint64_t rng_seed, const EmulationConfig& config = {});

/// Ground-truth per-seed targets for a ROI, used by the loss checks.
struct RoiTargets {
  OffsetField keypoint_offsets;
  EndpointOffsetField endpoint_offsets;
  OffsetField scatter_offsets;
};
RoiTargets exact_targets(const RoiPrediction& roi);

}  // namespace acf
