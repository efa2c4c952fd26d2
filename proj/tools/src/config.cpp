#include "acf_cli/config.hpp"

#include "acf/error.hpp"
#include "acf/io.hpp"

#include <set>
#include <string>

namespace acf::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

// Reads fields of one JSON object and rejects any key that was not asked for.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_ + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& value) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      value = it->get<T>();
    } catch (const json::exception&) {
      bad(path_ + "." + key + " has the wrong type");
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) bad("unknown config key '" + path_ + "." + key + "'");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec3 vec3_of(const std::vector<double>& v, const char* what) {
  if (v.size() != 3) bad(std::string(what) + " must hold 3 numbers");
  return {v[0], v[1], v[2]};
}

}  // namespace

void RunConfig::validate() const {
  if (n_scenes < 0) throw Error(ErrorCode::InvalidSpec, "n_scenes must be non-negative");
  if (scene.min_objects < 1 || scene.max_objects < scene.min_objects) {
    throw Error(ErrorCode::InvalidSpec, "object count range is invalid");
  }
  if (scene.classes.empty()) throw Error(ErrorCode::InvalidSpec, "scene.classes is empty");
  noise.validate();
  if (emulation.grid_n < 1 || emulation.min_masked_seeds < 1) {
    throw Error(ErrorCode::InvalidSpec, "emulation sizes must be positive");
  }
  estimator.mean_shift.validate();
  estimator.ransac.validate();
  if (!(estimator.mask_threshold >= 0.0 && estimator.mask_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "mask_threshold must lie in [0, 1]");
  }
  if (!(min_pair_score >= -1.0 && min_pair_score <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "min_score must lie in [-1, 1]");
  }
  manipulation.pour.validate();
  if (!(manipulation.stir_stroke > 0.0) || manipulation.stir_steps < 1 ||
      !(manipulation.descent_height >= 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "stir parameters are invalid");
  }
  evaluation.thresholds.validate();
  for (double a : evaluation.curve_angles_deg) {
    if (!(a > 0.0)) throw Error(ErrorCode::InvalidSpec, "curve angles must be positive");
  }
  for (double t : evaluation.curve_translations_cm) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidSpec, "curve translations must be positive");
  }
  if (!(losscheck.h > 0.0)) throw Error(ErrorCode::InvalidSpec, "losscheck.h must be positive");
  if (!(losscheck.probe_sigma >= 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "losscheck.probe_sigma must be non-negative");
  }
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  Section top(j, "config");
  top.read("n_scenes", c.n_scenes);
  top.read("seed", c.seed);

  if (const json* s = top.child("scene")) {
    Section sec(*s, "scene");
    sec.read("min_objects", c.scene.min_objects);
    sec.read("max_objects", c.scene.max_objects);
    sec.read("workspace_half_extent", c.scene.workspace_half_extent);
    sec.read("dims_jitter", c.scene.dims_jitter);
    std::vector<std::string> names;
    sec.read("classes", names);
    if (sec.child("classes")) {
      c.scene.classes.clear();
      for (const auto& n : names) c.scene.classes.push_back(object_class_from_string(n));
    }
    sec.finish();
  }
  if (const json* s = top.child("noise")) c.noise = io::noise_from_json(*s);
  if (const json* s = top.child("emulation")) {
    Section sec(*s, "emulation");
    sec.read("grid_n", c.emulation.grid_n);
    sec.read("min_masked_seeds", c.emulation.min_masked_seeds);
    sec.finish();
  }
  if (const json* s = top.child("estimator")) {
    Section sec(*s, "estimator");
    std::string method(to_string(c.estimator.axis_method));
    sec.read("axis_method", method);
    c.estimator.axis_method = axis_method_from_string(method);
    sec.read("mask_threshold", c.estimator.mask_threshold);
    if (const json* m = sec.child("mean_shift")) {
      Section ms(*m, "estimator.mean_shift");
      ms.read("bandwidth", c.estimator.mean_shift.bandwidth);
      ms.read("max_iterations", c.estimator.mean_shift.max_iterations);
      ms.read("convergence_tol", c.estimator.mean_shift.convergence_tol);
      ms.read("merge_radius", c.estimator.mean_shift.merge_radius);
      ms.finish();
    }
    if (const json* r = sec.child("ransac")) {
      Section rs(*r, "estimator.ransac");
      rs.read("iterations", c.estimator.ransac.iterations);
      rs.read("inlier_threshold", c.estimator.ransac.inlier_threshold);
      rs.read("min_inlier_fraction", c.estimator.ransac.min_inlier_fraction);
      rs.read("rng_seed", c.estimator.ransac.rng_seed);
      rs.finish();
    }
    sec.finish();
  }
  if (const json* s = top.child("association")) {
    Section sec(*s, "association");
    sec.read("min_score", c.min_pair_score);
    sec.finish();
  }
  if (const json* s = top.child("manipulation")) {
    Section sec(*s, "manipulation");
    sec.read("pour_height", c.manipulation.pour.height);
    sec.read("pour_radius", c.manipulation.pour.radius);
    sec.read("tilt_profile_deg", c.manipulation.pour.tilt_profile_deg);
    sec.read("pour_steps", c.manipulation.pour.steps);
    sec.read("stir_stroke", c.manipulation.stir_stroke);
    sec.read("stir_steps", c.manipulation.stir_steps);
    sec.read("descent_height", c.manipulation.descent_height);
    std::vector<double> base{c.manipulation.robot_base.x(), c.manipulation.robot_base.y(),
                             c.manipulation.robot_base.z()};
    sec.read("robot_base", base);
    c.manipulation.robot_base = vec3_of(base, "manipulation.robot_base");
    sec.finish();
  }
  if (const json* s = top.child("evaluation")) {
    Section sec(*s, "evaluation");
    sec.read("max_angle_deg", c.evaluation.thresholds.max_angle_deg);
    sec.read("max_translation_m", c.evaluation.thresholds.max_translation_m);
    sec.read("curve_angles_deg", c.evaluation.curve_angles_deg);
    sec.read("curve_translations_cm", c.evaluation.curve_translations_cm);
    sec.finish();
  }
  if (const json* s = top.child("losscheck")) {
    Section sec(*s, "losscheck");
    sec.read("h", c.losscheck.h);
    sec.read("probe_sigma", c.losscheck.probe_sigma);
    sec.read("probe_seed", c.losscheck.probe_seed);
    std::string mode = "signed";
    sec.read("inner_mode", mode);
    if (mode == "signed") c.losscheck.inner_mode = InnerLossMode::Signed;
    else if (mode == "absolute") c.losscheck.inner_mode = InnerLossMode::Absolute;
    else if (mode == "squared") c.losscheck.inner_mode = InnerLossMode::Squared;
    else bad("losscheck.inner_mode must be signed, absolute or squared");
    sec.finish();
  }
  top.finish();
  c.validate();
  return c;
}

json to_json(const RunConfig& c) {
  json classes = json::array();
  for (ObjectClass o : c.scene.classes) classes.push_back(std::string(to_string(o)));
  const auto& ms = c.estimator.mean_shift;
  const auto& rs = c.estimator.ransac;
  const auto& m = c.manipulation;
  return {
      {"n_scenes", c.n_scenes},
      {"seed", c.seed},
      {"scene", {{"min_objects", c.scene.min_objects},
                 {"max_objects", c.scene.max_objects},
                 {"workspace_half_extent", c.scene.workspace_half_extent},
                 {"dims_jitter", c.scene.dims_jitter},
                 {"classes", classes}}},
      {"noise", io::to_json(c.noise)},
      {"emulation", {{"grid_n", c.emulation.grid_n}, {"min_masked_seeds", c.emulation.min_masked_seeds}}},
      {"estimator", {{"axis_method", std::string(to_string(c.estimator.axis_method))},
                     {"mask_threshold", c.estimator.mask_threshold},
                     {"mean_shift", {{"bandwidth", ms.bandwidth},
                                     {"max_iterations", ms.max_iterations},
                                     {"convergence_tol", ms.convergence_tol},
                                     {"merge_radius", ms.merge_radius}}},
                     {"ransac", {{"iterations", rs.iterations},
                                 {"inlier_threshold", rs.inlier_threshold},
                                 {"min_inlier_fraction", rs.min_inlier_fraction},
                                 {"rng_seed", rs.rng_seed}}}}},
      {"association", {{"min_score", c.min_pair_score}}},
      {"manipulation", {{"pour_height", m.pour.height},
                        {"pour_radius", m.pour.radius},
                        {"tilt_profile_deg", m.pour.tilt_profile_deg},
                        {"pour_steps", m.pour.steps},
                        {"stir_stroke", m.stir_stroke},
                        {"stir_steps", m.stir_steps},
                        {"descent_height", m.descent_height},
                        {"robot_base", {m.robot_base.x(), m.robot_base.y(), m.robot_base.z()}}}},
      {"evaluation", {{"max_angle_deg", c.evaluation.thresholds.max_angle_deg},
                      {"max_translation_m", c.evaluation.thresholds.max_translation_m},
                      {"curve_angles_deg", c.evaluation.curve_angles_deg},
                      {"curve_translations_cm", c.evaluation.curve_translations_cm}}},
      {"losscheck", {{"h", c.losscheck.h},
                     {"probe_sigma", c.losscheck.probe_sigma},
                     {"probe_seed", c.losscheck.probe_seed},
                     {"inner_mode", c.losscheck.inner_mode == InnerLossMode::Signed     ? "signed"
                                    : c.losscheck.inner_mode == InnerLossMode::Absolute ? "absolute"
                                                                                        : "squared"}}},
  };
}

}  // namespace acf::cli
