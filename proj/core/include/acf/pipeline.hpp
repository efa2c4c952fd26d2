#pragma once

// Scene-level glue: per-ROI estimation, association and manipulation
// planning with a per-stage failure ledger, as used by the CLI.

#include "acf/association.hpp"
#include "acf/error.hpp"
#include "acf/estimation.hpp"
#include "acf/manipulation.hpp"
#include "acf/synthetic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace acf {

inline constexpr int kFormatVersion = 1;

struct EstimatorConfig {
  AxisMethod axis_method = AxisMethod::Endpoints;
  MeanShiftConfig mean_shift;
  RansacConfig ransac;
  double mask_threshold = kDefaultMaskThreshold;
};

struct PartEstimate {
  std::size_t roi_index = 0;
  PartClass part_class = PartClass::Container;
  double score = 1.0;
  Acf acf{Vec3::Zero(), Vec3::UnitZ()};
  std::optional<Vec2> paf_direction;
};

struct StageFailure {
  std::size_t index = 0;  // ROI or hypothesis index
  std::string stage;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

struct SceneEstimates {
  std::string scene_id;
  CameraSpec camera;
  Vec3 gravity = -Vec3::UnitZ();
  AxisMethod axis_method = AxisMethod::Endpoints;
  std::vector<PartEstimate> parts;
  std::vector<StageFailure> failures;
};

SceneEstimates estimate_scene(const PredictionBundle& bundle, const EstimatorConfig& config = {});

struct SceneAssociation {
  SceneEstimates estimates;
  std::vector<ObjectHypothesis> objects;
};

SceneAssociation associate_scene(const SceneEstimates& estimates,
                                 double min_score = kDefaultMinPairScore);

struct ManipulationConfig {
  PourParams pour;
  double stir_stroke = 0.03;
  int stir_steps = 10;
  double descent_height = 0.15;
  Vec3 robot_base = Vec3(-0.6, 0.0, 0.4);  // world frame
};

struct PlannedGrasp {
  std::size_t object = 0;
  std::string rule;  // "mug", "bottle" or "spoon"
  GraspPose pose;    // world frame
};

struct ManipulationPlan {
  std::string scene_id;
  std::vector<PlannedGrasp> grasps;
  std::optional<Trajectory> pour;
  std::optional<Trajectory> stir;
  std::vector<StageFailure> failures;
};

/// Converts ACFs to the world frame (up = -gravity) and composes grasps for
/// every graspable hypothesis, a pour from the first graspable container
/// into the next container, and a stir of the first spoon in the pour target.
ManipulationPlan plan_manipulation(const SceneAssociation& association,
                                   const ManipulationConfig& config = {});

}  // namespace acf
