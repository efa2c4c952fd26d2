#include "acf/pipeline.hpp"

#include <map>

namespace acf {

namespace {

StageFailure failure(std::size_t index, std::string stage, const Error& e) {
  return {index, std::move(stage), e.code(), e.what()};
}

}  // namespace

SceneEstimates estimate_scene(const PredictionBundle& bundle, const EstimatorConfig& config) {
  SceneEstimates out;
  out.scene_id = bundle.scene_id;
  out.camera = bundle.camera;
  out.gravity = bundle.gravity;
  out.axis_method = config.axis_method;

  for (std::size_t i = 0; i < bundle.rois.size(); ++i) {
    const RoiPrediction& roi = bundle.rois[i];
    try {
      const Vec3 keypoint = estimate_keypoint(roi.seeds, roi.keypoint_offsets, roi.mask,
                                              config.mean_shift, config.mask_threshold);
      AxisEstimate axis;
      switch (config.axis_method) {
        case AxisMethod::Endpoints:
          axis = estimate_axis_endpoints(roi.seeds, roi.endpoint_offsets, roi.mask,
                                         config.mean_shift, config.mask_threshold);
          break;
        case AxisMethod::Vector:
          axis = estimate_axis_vector(roi.axis_vectors, roi.mask, keypoint, config.mask_threshold);
          break;
        case AxisMethod::ScatterLine:
          axis = estimate_axis_scatterline(roi.seeds, roi.scatter_offsets, roi.labels, roi.mask,
                                           config.ransac, config.mask_threshold);
          break;
      }
      PartEstimate part;
      part.roi_index = i;
      part.part_class = roi.part_class;
      part.score = roi.score;
      part.acf = Acf(keypoint, axis.direction);
      try {
        part.paf_direction = mean_paf_direction({roi.paf, roi.mask}, config.mask_threshold);
      } catch (const Error& e) {
        out.failures.push_back(failure(i, "paf", e));
      }
      out.parts.push_back(std::move(part));
    } catch (const Error& e) {
      out.failures.push_back(failure(i, "estimate", e));
    }
  }
  return out;
}

SceneAssociation associate_scene(const SceneEstimates& estimates, double min_score) {
  std::vector<PartInstance> parts;
  std::vector<std::optional<Vec2>> dirs;
  for (const auto& p : estimates.parts) {
    parts.push_back({p.part_class, p.acf, nullptr, p.score});
    dirs.push_back(p.paf_direction);
  }
  SceneAssociation out;
  out.estimates = estimates;
  out.objects = assemble_objects(parts, dirs, estimates.camera.intrinsics, min_score);
  return out;
}

ManipulationPlan plan_manipulation(const SceneAssociation& association,
                                   const ManipulationConfig& config) {
  const SceneEstimates& est = association.estimates;
  const RigidTransform& to_world = est.camera.extrinsic;
  const Vec3 up = -est.gravity.normalized();

  ManipulationPlan plan;
  plan.scene_id = est.scene_id;

  std::vector<std::map<PartClass, Acf>> objects;
  for (const auto& h : association.objects) {
    std::map<PartClass, Acf> parts;
    for (std::size_t idx : h.parts) {
      parts.emplace(est.parts.at(idx).part_class, est.parts.at(idx).acf.transformed(to_world));
    }
    objects.push_back(std::move(parts));
  }

  std::vector<std::size_t> graspable_containers, containers, spoons;
  for (std::size_t oi = 0; oi < objects.size(); ++oi) {
    const auto& parts = objects[oi];
    const bool container = parts.contains(PartClass::Container);
    const bool handle = parts.contains(PartClass::Handle);
    const bool spoon = parts.contains(PartClass::Stir) && parts.contains(PartClass::Scoop);
    if (container) containers.push_back(oi);
    try {
      if (container && handle) {
        plan.grasps.push_back(
            {oi, "mug", grasp_mug(parts.at(PartClass::Handle), parts.at(PartClass::Container))});
        graspable_containers.push_back(oi);
      } else if (container) {
        const Acf& c = parts.at(PartClass::Container);
        const Vec3 from = approach_from_base(c.keypoint(), config.robot_base, up);
        plan.grasps.push_back({oi, "bottle", grasp_bottle(c, from, up)});
        graspable_containers.push_back(oi);
      } else if (spoon) {
        const Acf& s = parts.at(PartClass::Stir);
        const Vec3 from = approach_from_base(s.keypoint(), config.robot_base, up);
        plan.grasps.push_back({oi, "spoon", grasp_spoon(s, parts.at(PartClass::Scoop), from)});
        spoons.push_back(oi);
      }
    } catch (const Error& e) {
      plan.failures.push_back(failure(oi, "grasp", e));
    }
  }

  std::optional<std::size_t> pour_target;
  if (!graspable_containers.empty()) {
    const std::size_t source = graspable_containers.front();
    for (std::size_t c : containers) {
      if (c == source) continue;
      pour_target = c;
      try {
        plan.pour = pour_trajectory(objects[source].at(PartClass::Container),
                                    objects[c].at(PartClass::Container), config.pour, up);
      } catch (const Error& e) {
        plan.failures.push_back(failure(c, "pour", e));
      }
      break;
    }
  }

  if (!spoons.empty() && !containers.empty()) {
    const std::size_t bowl = pour_target.value_or(containers.front());
    const auto& spoon = objects[spoons.front()];
    try {
      plan.stir = stir_trajectory(spoon.at(PartClass::Stir), spoon.at(PartClass::Scoop),
                                  objects[bowl].at(PartClass::Container), config.stir_stroke,
                                  config.stir_steps, config.descent_height, up);
    } catch (const Error& e) {
      plan.failures.push_back(failure(spoons.front(), "stir", e));
    }
  }
  return plan;
}

}  // namespace acf
