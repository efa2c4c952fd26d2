#include "acf/io.hpp"

#include "acf/error.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace acf::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, what);
}

const json& field(const json& j, const char* key) {
  if (!j.is_object()) schema_error(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    schema_error(std::string("field '") + key + "': " + e.what());
  }
}

json vec(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }
json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec3 vec3(const json& j) {
  if (!j.is_array() || j.size() != 3) schema_error("expected a 3-vector");
  try {
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

Vec2 vec2(const json& j) {
  if (!j.is_array() || j.size() != 2) schema_error("expected a 2-vector");
  try {
    return {j[0].get<double>(), j[1].get<double>()};
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

json mat(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

Mat3 mat3(const json& j) {
  if (!j.is_array() || j.size() != 3) schema_error("expected a 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = vec3(j[r]).transpose();
  return m;
}

json transform(const RigidTransform& t) {
  return {{"rotation", mat(t.rotation)}, {"translation", vec(t.translation)}};
}

RigidTransform transform_from(const json& j) {
  return {mat3(field(j, "rotation")), vec3(field(j, "translation"))};
}

template <typename V, typename F>
json array_of(const std::vector<V>& items, F&& f) {
  json a = json::array();
  for (const auto& x : items) a.push_back(f(x));
  return a;
}

template <typename F>
auto array_from(const json& j, const char* key, F&& f) {
  const json& a = field(j, key);
  if (!a.is_array()) schema_error(std::string("field '") + key + "' must be an array");
  std::vector<decltype(f(a[0]))> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(f(x));
  return out;
}

json camera(const CameraSpec& c) {
  return {{"fx", c.intrinsics.fx},     {"fy", c.intrinsics.fy}, {"cx", c.intrinsics.cx},
          {"cy", c.intrinsics.cy},     {"width", c.width},      {"height", c.height},
          {"extrinsic", transform(c.extrinsic)}};
}

CameraSpec camera_from(const json& j) {
  CameraSpec c;
  c.intrinsics = {get<double>(j, "fx"), get<double>(j, "fy"), get<double>(j, "cx"),
                  get<double>(j, "cy")};
  c.width = get<int>(j, "width");
  c.height = get<int>(j, "height");
  c.extrinsic = transform_from(field(j, "extrinsic"));
  return c;
}

json dims(const PartDims& d) {
  return {{"container_radius", d.container_radius},
          {"container_height", d.container_height},
          {"handle_major_radius", d.handle_major_radius},
          {"handle_minor_radius", d.handle_minor_radius},
          {"stir_length", d.stir_length},
          {"stir_width", d.stir_width},
          {"stir_thickness", d.stir_thickness},
          {"scoop_half_length", d.scoop_half_length},
          {"scoop_half_width", d.scoop_half_width},
          {"scoop_depth", d.scoop_depth}};
}

PartDims dims_from(const json& j) {
  PartDims d;
  d.container_radius = get<double>(j, "container_radius");
  d.container_height = get<double>(j, "container_height");
  d.handle_major_radius = get<double>(j, "handle_major_radius");
  d.handle_minor_radius = get<double>(j, "handle_minor_radius");
  d.stir_length = get<double>(j, "stir_length");
  d.stir_width = get<double>(j, "stir_width");
  d.stir_thickness = get<double>(j, "stir_thickness");
  d.scoop_half_length = get<double>(j, "scoop_half_length");
  d.scoop_half_width = get<double>(j, "scoop_half_width");
  d.scoop_depth = get<double>(j, "scoop_depth");
  return d;
}

json failures(const std::vector<StageFailure>& fs) {
  return array_of(fs, [](const StageFailure& f) {
    return json{{"index", f.index},
                {"stage", f.stage},
                {"error", std::string(to_string(f.code))},
                {"message", f.message}};
  });
}

ErrorCode error_code_from(const std::string& name) {
  for (int c = 0; c <= static_cast<int>(ErrorCode::SchemaViolation); ++c) {
    if (to_string(static_cast<ErrorCode>(c)) == name) return static_cast<ErrorCode>(c);
  }
  schema_error("unknown error code '" + name + "'");
}

std::vector<StageFailure> failures_from(const json& j) {
  return array_from(j, "failures", [](const json& f) {
    return StageFailure{get<std::size_t>(f, "index"), get<std::string>(f, "stage"),
                        error_code_from(get<std::string>(f, "error")),
                        get<std::string>(f, "message")};
  });
}

json trajectory(const Trajectory& t) {
  return {{"waypoints", array_of(t.waypoints, [](const Waypoint& w) {
             return json{{"phase", w.phase}, {"position", vec(w.position)}, {"frame", mat(w.frame)}};
           })}};
}

json with_header(const char* kind, json body) {
  json j = {{"format_version", kFormatVersion}, {"kind", kind}};
  j.update(body);
  return j;
}

}  // namespace

void check_format_version(const json& j) {
  if (!j.is_object() || !j.contains("format_version")) schema_error("missing format_version");
  if (!j["format_version"].is_number_integer() || j["format_version"].get<int>() != kFormatVersion) {
    schema_error("unsupported format_version");
  }
}

json to_json(const Acf& acf) { return {{"keypoint", vec(acf.keypoint())}, {"axis", vec(acf.axis())}}; }

Acf acf_from_json(const json& j) {
  try {
    return Acf(vec3(field(j, "keypoint")), vec3(field(j, "axis")));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SchemaViolation) throw;
    schema_error(e.what());
  }
}

json to_json(const SceneSpec& spec) {
  return with_header(
      "scene_spec",
      {{"scene_id", spec.scene_id},
       {"rng_seed", spec.rng_seed},
       {"camera", camera(spec.camera)},
       {"gravity", vec(spec.gravity)},
       {"objects", array_of(spec.objects, [](const ObjectSpec& o) {
          return json{{"class", std::string(to_string(o.object_class))},
                      {"pose", transform(o.pose)},
                      {"dims", dims(o.dims)}};
        })}});
}

SceneSpec scene_spec_from_json(const json& j) {
  check_format_version(j);
  SceneSpec spec;
  spec.scene_id = get<std::string>(j, "scene_id");
  spec.rng_seed = get<std::uint64_t>(j, "rng_seed");
  spec.camera = camera_from(field(j, "camera"));
  spec.gravity = vec3(field(j, "gravity"));
  spec.objects = array_from(j, "objects", [](const json& o) {
    return ObjectSpec{object_class_from_string(get<std::string>(o, "class")),
                      transform_from(field(o, "pose")), dims_from(field(o, "dims"))};
  });
  return spec;
}

json to_json(const Scene& scene) {
  json j = to_json(scene.spec);
  j["kind"] = "scene";
  j["depth"] = scene.depth.values;
  j["part_labels"] = scene.part_labels;
  j["ground_truth"] = array_of(scene.parts, [](const ScenePart& p) {
    json g = to_json(p.acf);
    g["part_class"] = std::string(to_string(p.part_class));
    g["object_index"] = p.object_index;
    g["endpoint1"] = vec(p.endpoint1);
    g["endpoint2"] = vec(p.endpoint2);
    g["visible_pixels"] = p.visible_pixels;
    return g;
  });
  return j;
}

Scene scene_from_json(const json& j) {
  Scene scene;
  scene.spec = scene_spec_from_json(j);
  scene.depth = DepthImage(scene.spec.camera.width, scene.spec.camera.height);
  scene.depth.values = get<std::vector<double>>(j, "depth");
  scene.part_labels = get<std::vector<int>>(j, "part_labels");
  try {
    scene.depth.validate();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  if (scene.part_labels.size() != scene.depth.values.size()) {
    schema_error("part_labels size does not match the image");
  }
  scene.parts = array_from(j, "ground_truth", [](const json& g) {
    ScenePart p;
    p.part_class = part_class_from_string(get<std::string>(g, "part_class"));
    p.object_index = get<std::size_t>(g, "object_index");
    p.acf = acf_from_json(g);
    p.endpoint1 = vec3(field(g, "endpoint1"));
    p.endpoint2 = vec3(field(g, "endpoint2"));
    p.visible_pixels = get<int>(g, "visible_pixels");
    return p;
  });
  return scene;
}

json to_json(const PredictionBundle& bundle) {
  json rois = json::array();
  for (const RoiPrediction& r : bundle.rois) {
    json seeds_uv = json::array(), seeds_depth = json::array(), seeds_point = json::array(),
         seeds_valid = json::array();
    for (const Seed& s : r.seeds.seeds) {
      seeds_uv.push_back(vec(s.pixel_uv));
      seeds_depth.push_back(s.depth);
      seeds_point.push_back(vec(s.point3d));
      seeds_valid.push_back(s.valid);
    }
    json endpoints = json::array();
    for (const auto& pair : r.endpoint_offsets.offsets) {
      endpoints.push_back(json::array({pair[0].x(), pair[0].y(), pair[0].z(), pair[1].x(),
                                       pair[1].y(), pair[1].z()}));
    }
    json truth = to_json(r.truth.acf);
    truth["endpoint1"] = vec(r.truth.endpoint1);
    truth["endpoint2"] = vec(r.truth.endpoint2);
    truth["object_index"] = r.truth.object_index;
    truth["scene_part"] = r.truth.scene_part;
    rois.push_back({
        {"part_class", std::string(to_string(r.part_class))},
        {"score", r.score},
        {"roi", json::array({r.roi.x_min, r.roi.y_min, r.roi.x_max, r.roi.y_max})},
        {"grid_n", r.seeds.n},
        {"seed_uv", seeds_uv},
        {"seed_depth", seeds_depth},
        {"seed_point", seeds_point},
        {"seed_valid", seeds_valid},
        {"mask", r.mask.weights},
        {"keypoint_offsets", array_of(r.keypoint_offsets.offsets, [](const Vec3& v) { return vec(v); })},
        {"endpoint_offsets", endpoints},
        {"axis_vectors", array_of(r.axis_vectors, [](const Vec3& v) { return vec(v); })},
        {"scatter_offsets", array_of(r.scatter_offsets.offsets, [](const Vec3& v) { return vec(v); })},
        {"label_logits", r.labels.logits},
        {"labels_star", r.labels.labels_star},
        {"paf", array_of(r.paf, [](const Vec2& v) { return vec(v); })},
        {"paf_target_star", vec(r.paf_target_star)},
        {"keypoint_outlier", r.keypoint_outlier},
        {"truth", truth},
    });
  }
  return with_header("predictions", {{"scene_id", bundle.scene_id},
                                     {"camera", camera(bundle.camera)},
                                     {"gravity", vec(bundle.gravity)},
                                     {"rois", rois}});
}

PredictionBundle bundle_from_json(const json& j) {
  check_format_version(j);
  PredictionBundle b;
  b.scene_id = get<std::string>(j, "scene_id");
  b.camera = camera_from(field(j, "camera"));
  b.gravity = vec3(field(j, "gravity"));
  b.rois = array_from(j, "rois", [](const json& r) {
    RoiPrediction roi;
    roi.part_class = part_class_from_string(get<std::string>(r, "part_class"));
    roi.score = get<double>(r, "score");
    const auto box = get<std::vector<double>>(r, "roi");
    if (box.size() != 4) schema_error("roi must hold 4 numbers");
    roi.roi = {box[0], box[1], box[2], box[3]};
    roi.seeds.n = get<int>(r, "grid_n");
    const auto uv = array_from(r, "seed_uv", vec2);
    const auto depth = get<std::vector<double>>(r, "seed_depth");
    const auto point = array_from(r, "seed_point", vec3);
    const auto valid = get<std::vector<bool>>(r, "seed_valid");
    const std::size_t n = static_cast<std::size_t>(roi.seeds.n) * roi.seeds.n;
    if (uv.size() != n || depth.size() != n || point.size() != n || valid.size() != n) {
      schema_error("seed arrays must hold grid_n^2 entries");
    }
    for (std::size_t i = 0; i < n; ++i) roi.seeds.seeds.push_back({uv[i], depth[i], point[i], valid[i]});
    roi.mask.weights = get<std::vector<double>>(r, "mask");
    roi.keypoint_offsets.offsets = array_from(r, "keypoint_offsets", vec3);
    roi.endpoint_offsets.offsets = array_from(r, "endpoint_offsets", [](const json& e) {
      const auto v = e.get<std::vector<double>>();
      if (v.size() != 6) schema_error("endpoint offsets need 6 numbers");
      return std::array<Vec3, 2>{Vec3(v[0], v[1], v[2]), Vec3(v[3], v[4], v[5])};
    });
    roi.axis_vectors = array_from(r, "axis_vectors", vec3);
    roi.scatter_offsets.offsets = array_from(r, "scatter_offsets", vec3);
    roi.labels.logits = get<std::vector<double>>(r, "label_logits");
    roi.labels.labels_star = get<std::vector<int>>(r, "labels_star");
    roi.paf = array_from(r, "paf", vec2);
    roi.paf_target_star = vec2(field(r, "paf_target_star"));
    roi.keypoint_outlier = get<std::vector<bool>>(r, "keypoint_outlier");
    for (std::size_t len : {roi.mask.size(), roi.keypoint_offsets.size(), roi.endpoint_offsets.size(),
                            roi.axis_vectors.size(), roi.scatter_offsets.size(),
                            roi.labels.logits.size(), roi.labels.labels_star.size(), roi.paf.size()}) {
      if (len != n) schema_error("per-seed arrays must hold grid_n^2 entries");
    }
    try {
      roi.mask.validate();
    } catch (const Error& e) {
      schema_error(e.what());
    }
    const json& t = field(r, "truth");
    roi.truth = {acf_from_json(t), vec3(field(t, "endpoint1")), vec3(field(t, "endpoint2")),
                 get<std::size_t>(t, "object_index"), get<std::size_t>(t, "scene_part")};
    return roi;
  });
  return b;
}

json to_json(const SceneEstimates& e) {
  return with_header(
      "estimates",
      {{"scene_id", e.scene_id},
       {"axis_method", std::string(to_string(e.axis_method))},
       {"camera", camera(e.camera)},
       {"gravity", vec(e.gravity)},
       {"parts", array_of(e.parts, [](const PartEstimate& p) {
          json j = to_json(p.acf);
          j["roi_index"] = p.roi_index;
          j["part_class"] = std::string(to_string(p.part_class));
          j["score"] = p.score;
          j["paf_direction"] = p.paf_direction ? vec(*p.paf_direction) : json(nullptr);
          return j;
        })},
       {"failures", failures(e.failures)}});
}

SceneEstimates estimates_from_json(const json& j) {
  check_format_version(j);
  SceneEstimates e;
  e.scene_id = get<std::string>(j, "scene_id");
  e.axis_method = axis_method_from_string(get<std::string>(j, "axis_method"));
  e.camera = camera_from(field(j, "camera"));
  e.gravity = vec3(field(j, "gravity"));
  e.parts = array_from(j, "parts", [](const json& p) {
    PartEstimate pe;
    pe.roi_index = get<std::size_t>(p, "roi_index");
    pe.part_class = part_class_from_string(get<std::string>(p, "part_class"));
    pe.score = get<double>(p, "score");
    pe.acf = acf_from_json(p);
    const json& dir = field(p, "paf_direction");
    if (!dir.is_null()) pe.paf_direction = vec2(dir);
    return pe;
  });
  e.failures = failures_from(j);
  return e;
}

json to_json(const SceneAssociation& a) {
  return with_header("association",
                     {{"estimates", to_json(a.estimates)},
                      {"objects", array_of(a.objects, [](const ObjectHypothesis& h) {
                         return json{{"parts", h.parts},
                                     {"object_class", h.object_class
                                                          ? json(std::string(to_string(*h.object_class)))
                                                          : json(nullptr)}};
                       })}});
}

SceneAssociation association_from_json(const json& j) {
  check_format_version(j);
  SceneAssociation a;
  a.estimates = estimates_from_json(field(j, "estimates"));
  a.objects = array_from(j, "objects", [&](const json& o) {
    ObjectHypothesis h;
    for (std::size_t p : get<std::vector<std::size_t>>(o, "parts")) {
      if (p >= a.estimates.parts.size()) schema_error("object refers to an unknown part");
      h.parts.insert(p);
    }
    const json& cls = field(o, "object_class");
    if (!cls.is_null()) h.object_class = object_class_from_string(cls.get<std::string>());
    return h;
  });
  return a;
}

json to_json(const ManipulationPlan& plan) {
  return with_header(
      "manipulation",
      {{"scene_id", plan.scene_id},
       {"grasps", array_of(plan.grasps, [](const PlannedGrasp& g) {
          return json{{"object", g.object},
                      {"rule", g.rule},
                      {"position", vec(g.pose.position)},
                      {"axes", mat(g.pose.axes)}};
        })},
       {"pour", plan.pour ? trajectory(*plan.pour) : json(nullptr)},
       {"stir", plan.stir ? trajectory(*plan.stir) : json(nullptr)},
       {"failures", failures(plan.failures)}});
}

json to_json(const EvalReport& r) {
  return with_header(
      "evaluation",
      {{"interpolation", r.interpolation},
       {"thresholds", {{"max_angle_deg", r.spec.max_angle_deg},
                       {"max_translation_m", r.spec.max_translation_m}}},
       {"mean_ap", r.mean_ap},
       {"classes", array_of(r.classes, [](const ClassReport& c) {
          return json{{"part_class", std::string(to_string(c.part_class))},
                      {"num_ground_truth", c.num_ground_truth},
                      {"num_predictions", c.num_predictions},
                      {"true_positives", c.true_positives},
                      {"ap", c.ap}};
        })}});
}

json to_json(const NoiseModel& n) {
  return {{"offset_sigma", n.offset_sigma},         {"outlier_fraction", n.outlier_fraction},
          {"outlier_box", n.outlier_box},           {"paf_angle_sigma", n.paf_angle_sigma},
          {"mask_flip_prob", n.mask_flip_prob},     {"vector_sigma", n.vector_sigma}};
}

NoiseModel noise_from_json(const json& j) {
  if (!j.is_object()) schema_error("noise must be an object");
  NoiseModel n;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) schema_error("noise field '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "offset_sigma") n.offset_sigma = v;
    else if (key == "outlier_fraction") n.outlier_fraction = v;
    else if (key == "outlier_box") n.outlier_box = v;
    else if (key == "paf_angle_sigma") n.paf_angle_sigma = v;
    else if (key == "mask_flip_prob") n.mask_flip_prob = v;
    else if (key == "vector_sigma") n.vector_sigma = v;
    else schema_error("unknown noise field '" + key + "'");
  }
  try {
    n.validate();
  } catch (const Error& e) {
    schema_error(e.what());
  }
  return n;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    schema_error(path.string() + ": " + e.what());
  }
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(1) + "\n");
}

}  // namespace acf::io
