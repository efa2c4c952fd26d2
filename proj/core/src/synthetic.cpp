#include "acf/synthetic.hpp"

#include "acf/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace acf {

namespace {

constexpr double kNoHit = std::numeric_limits<double>::infinity();
constexpr double kMinT = 1e-9;

enum class Shape { Cylinder, Torus, Box, EllipsoidShell };

// A primitive in its own local frame; `pose` maps local -> world.
struct Primitive {
  Shape shape = Shape::Box;
  RigidTransform pose;
  Vec3 size = Vec3::Zero();  // shape-specific, see intersect()
  Vec3 bound_center = Vec3::Zero();
  double bound_radius = 0.0;
  int part = -1;
};

double ray_sphere_entry(const Vec3& o, const Vec3& d, const Vec3& c, double r, double* exit) {
  const Vec3 oc = o - c;
  const double a = d.squaredNorm();
  const double b = oc.dot(d);
  const double cc = oc.squaredNorm() - r * r;
  const double disc = b * b - a * cc;
  if (disc < 0.0) return kNoHit;
  const double s = std::sqrt(disc);
  if (exit) *exit = (-b + s) / a;
  return (-b - s) / a;
}

// Solid closed cylinder: radius size.x, z in [0, size.y].
double hit_cylinder(const Vec3& o, const Vec3& d, const Vec3& size) {
  const double r = size.x(), h = size.y();
  double best = kNoHit;
  const double a = d.x() * d.x() + d.y() * d.y();
  if (a > 0.0) {
    const double b = o.x() * d.x() + o.y() * d.y();
    const double c = o.x() * o.x() + o.y() * o.y() - r * r;
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      for (double t : {(-b - s) / a, (-b + s) / a}) {
        const double z = o.z() + t * d.z();
        if (t > kMinT && z >= 0.0 && z <= h) best = std::min(best, t);
      }
    }
  }
  if (d.z() != 0.0) {
    for (double zc : {0.0, h}) {
      const double t = (zc - o.z()) / d.z();
      const double x = o.x() + t * d.x(), y = o.y() + t * d.y();
      if (t > kMinT && x * x + y * y <= r * r) best = std::min(best, t);
    }
  }
  return best;
}

// Torus around the local y axis: centerline radius size.x, tube radius size.y.
double torus_sdf(const Vec3& p, const Vec3& size) {
  const double q = std::hypot(p.x(), p.z()) - size.x();
  return std::hypot(q, p.y()) - size.y();
}

double hit_torus(const Vec3& o, const Vec3& d, const Vec3& size) {
  double exit = 0.0;
  double t = ray_sphere_entry(o, d, Vec3::Zero(), size.x() + size.y(), &exit);
  if (t == kNoHit || exit < kMinT) return kNoHit;
  t = std::max(t, kMinT);
  const double speed = d.norm();
  for (int i = 0; i < 512 && t <= exit; ++i) {
    const double dist = torus_sdf(o + t * d, size);
    if (dist < 1e-8) return t;
    t += dist / speed;
  }
  return kNoHit;
}

// Axis-aligned box with half extents `size`.
double hit_box(const Vec3& o, const Vec3& d, const Vec3& size) {
  double t0 = -kNoHit, t1 = kNoHit;
  for (int k = 0; k < 3; ++k) {
    if (d[k] == 0.0) {
      if (std::abs(o[k]) > size[k]) return kNoHit;
      continue;
    }
    double a = (-size[k] - o[k]) / d[k];
    double b = (size[k] - o[k]) / d[k];
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (t0 > t1) return kNoHit;
  if (t0 > kMinT) return t0;
  return t1 > kMinT ? t1 : kNoHit;
}

// Thin shell: lower half (z <= 0) of the ellipsoid with semi-axes `size`.
double hit_ellipsoid_shell(const Vec3& o, const Vec3& d, const Vec3& size) {
  const Vec3 os = o.cwiseQuotient(size);
  const Vec3 ds = d.cwiseQuotient(size);
  const double a = ds.squaredNorm();
  const double b = os.dot(ds);
  const double c = os.squaredNorm() - 1.0;
  const double disc = b * b - a * c;
  if (disc < 0.0) return kNoHit;
  const double s = std::sqrt(disc);
  for (double t : {(-b - s) / a, (-b + s) / a}) {
    if (t > kMinT && o.z() + t * d.z() <= 0.0) return t;
  }
  return kNoHit;
}

double intersect(const Primitive& prim, const Vec3& origin, const Vec3& dir) {
  if (ray_sphere_entry(origin, dir, prim.bound_center, prim.bound_radius, nullptr) == kNoHit) {
    return kNoHit;
  }
  const Mat3 rt = prim.pose.rotation.transpose();
  const Vec3 o = rt * (origin - prim.pose.translation);
  const Vec3 d = rt * dir;
  switch (prim.shape) {
    case Shape::Cylinder: return hit_cylinder(o, d, prim.size);
    case Shape::Torus: return hit_torus(o, d, prim.size);
    case Shape::Box: return hit_box(o, d, prim.size);
    case Shape::EllipsoidShell: return hit_ellipsoid_shell(o, d, prim.size);
  }
  return kNoHit;
}

RigidTransform translation(const Vec3& t) { return {Mat3::Identity(), t}; }

struct LocalPart {
  PartClass part_class;
  Vec3 keypoint, axis, e1, e2;  // object frame
};

// Builds primitives and object-frame ACFs for one object.
void instantiate(const ObjectSpec& obj, int first_part, std::vector<Primitive>& prims,
                 std::vector<LocalPart>& parts) {
  const PartDims& dm = obj.dims;
  auto add_prim = [&](Shape shape, const RigidTransform& local, const Vec3& size, double radius) {
    Primitive p;
    p.shape = shape;
    p.pose = obj.pose * local;
    p.size = size;
    p.bound_center = p.pose.translation;
    p.bound_radius = radius;
    p.part = first_part + static_cast<int>(parts.size());
    prims.push_back(p);
  };

  auto add_container = [&] {
    const double r = dm.container_radius, h = dm.container_height;
    add_prim(Shape::Cylinder, {}, Vec3(r, h, 0.0), 0.0);
    prims.back().bound_center = obj.pose.apply(Vec3(0, 0, h / 2));
    prims.back().bound_radius = std::hypot(r, h / 2) * 1.0001;
    parts.push_back({PartClass::Container, Vec3(0, 0, h / 2), Vec3::UnitZ(), Vec3::Zero(),
                     Vec3(0, 0, h)});
  };

  auto add_handle = [&] {
    const double r = dm.container_radius, h = dm.container_height;
    const double big = dm.handle_major_radius, tube = dm.handle_minor_radius;
    const Vec3 center(r, 0, h / 2);
    add_prim(Shape::Torus, translation(center), Vec3(big, tube, 0.0), (big + tube) * 1.0001);
    const Vec3 outer(r + big + tube, 0, h / 2);
    parts.push_back({PartClass::Handle, outer, -Vec3::UnitX(), outer, Vec3(r, 0, h / 2)});
  };

  // Spoon-like layout: the stir bar runs along +x and ends at x = 0, where
  // the scoop (if any) begins.
  auto add_stir = [&](double z_top) {
    const double len = dm.stir_length;
    const Vec3 half(len / 2, dm.stir_width / 2, dm.stir_thickness / 2);
    const Vec3 center(-len / 2, 0, z_top - dm.stir_thickness / 2);
    add_prim(Shape::Box, translation(center), half, half.norm() * 1.0001);
    parts.push_back({PartClass::Stir, center, Vec3::UnitX(), Vec3(-len, 0, center.z()),
                     Vec3(0, 0, center.z())});
  };

  auto add_scoop = [&] {
    const Vec3 semi(dm.scoop_half_length, dm.scoop_half_width, dm.scoop_depth);
    const Vec3 center(dm.scoop_half_length, 0, dm.scoop_depth);
    add_prim(Shape::EllipsoidShell, translation(center), semi, semi.maxCoeff() * 1.0001);
    const Vec3 bottom(center.x(), 0, 0);
    parts.push_back({PartClass::Scoop, bottom, Vec3::UnitZ(), bottom, center});
  };

  switch (obj.object_class) {
    case ObjectClass::Bottle:
    case ObjectClass::Bowl:
      add_container();
      break;
    case ObjectClass::Mug:
      add_container();
      add_handle();
      break;
    case ObjectClass::Spoon:
    case ObjectClass::Spatula:
      add_stir(dm.scoop_depth);
      add_scoop();
      break;
    case ObjectClass::Hammer:
      add_stir(dm.stir_thickness);
      break;
  }
}

PartDims default_dims(ObjectClass c) {
  PartDims d;
  switch (c) {
    case ObjectClass::Bottle:
      d.container_radius = 0.03;
      d.container_height = 0.16;
      break;
    case ObjectClass::Bowl:
      d.container_radius = 0.06;
      d.container_height = 0.05;
      break;
    case ObjectClass::Spatula:
      d.scoop_half_length = 0.035;
      d.scoop_half_width = 0.03;
      d.scoop_depth = 0.006;
      break;
    case ObjectClass::Hammer:
      d.stir_length = 0.16;
      d.stir_width = 0.02;
      d.stir_thickness = 0.015;
      break;
    default:
      break;
  }
  return d;
}

double footprint_radius(const ObjectSpec& o) {
  const PartDims& d = o.dims;
  switch (o.object_class) {
    case ObjectClass::Bottle:
    case ObjectClass::Bowl: return d.container_radius;
    case ObjectClass::Mug:
      return d.container_radius + d.handle_major_radius + d.handle_minor_radius;
    case ObjectClass::Spoon:
    case ObjectClass::Spatula: return std::max(d.stir_length, 2.0 * d.scoop_half_length);
    case ObjectClass::Hammer: return d.stir_length / 2;
  }
  return 0.1;
}

// Footprint centre in the object frame (spoons extend both ways from x = 0).
Vec3 footprint_center(const ObjectSpec& o) {
  switch (o.object_class) {
    case ObjectClass::Spoon:
    case ObjectClass::Spatula:
      return Vec3((2.0 * o.dims.scoop_half_length - o.dims.stir_length) / 2, 0, 0);
    case ObjectClass::Hammer: return Vec3(-o.dims.stir_length / 2, 0, 0);
    default: return Vec3::Zero();
  }
}

}  // namespace

void PartDims::validate() const {
  for (double v : {container_radius, container_height, handle_major_radius, handle_minor_radius,
                   stir_length, stir_width, stir_thickness, scoop_half_length, scoop_half_width,
                   scoop_depth}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidSpec, "part dimensions must be positive");
    }
  }
  if (handle_minor_radius >= handle_major_radius) {
    throw Error(ErrorCode::InvalidSpec, "handle tube radius must be below its centerline radius");
  }
}

void SceneSpec::validate() const {
  const auto check_rotation = [](const Mat3& r, const char* what) {
    if (frame_residual(r) > 1e-6) {
      throw Error(ErrorCode::InvalidSpec, std::string(what) + " rotation is not orthonormal");
    }
  };
  for (const auto& o : objects) {
    o.dims.validate();
    check_rotation(o.pose.rotation, "object");
  }
  check_rotation(camera.extrinsic.rotation, "camera");
  if (camera.width <= 0 || camera.height <= 0) {
    throw Error(ErrorCode::InvalidSpec, "image size must be positive");
  }
  try {
    camera.intrinsics.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidSpec, e.what());
  }
  if (std::abs(gravity.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidSpec, "gravity must be a unit vector");
  }
}

void NoiseModel::validate() const {
  if (!(offset_sigma >= 0.0) || !(paf_angle_sigma >= 0.0) || !(vector_sigma >= 0.0) ||
      !(outlier_box > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "noise scales must be non-negative");
  }
  if (!(outlier_fraction >= 0.0 && outlier_fraction <= 1.0) ||
      !(mask_flip_prob >= 0.0 && mask_flip_prob <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "probabilities must lie in [0, 1]");
  }
}

RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
  const Vec3 forward = (target - eye).normalized();
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);
  RigidTransform t;
  t.rotation.col(0) = right;
  t.rotation.col(1) = down;
  t.rotation.col(2) = forward;
  t.translation = eye;
  return t;
}

Scene generate_scene(const SceneSpec& spec) {
  spec.validate();
  Scene scene;
  scene.spec = spec;

  std::vector<Primitive> prims;
  const RigidTransform world_to_camera = spec.camera.extrinsic.inverse();
  for (std::size_t oi = 0; oi < spec.objects.size(); ++oi) {
    const ObjectSpec& obj = spec.objects[oi];
    std::vector<LocalPart> local;
    instantiate(obj, static_cast<int>(scene.parts.size()), prims, local);
    for (const LocalPart& lp : local) {
      const RigidTransform to_cam = world_to_camera * obj.pose;
      ScenePart part;
      part.part_class = lp.part_class;
      part.object_index = oi;
      part.acf = Acf(to_cam.apply(lp.keypoint), to_cam.rotate(lp.axis));
      part.endpoint1 = to_cam.apply(lp.e1);
      part.endpoint2 = to_cam.apply(lp.e2);
      scene.parts.push_back(part);
    }
  }

  const auto& cam = spec.camera;
  const auto& k = cam.intrinsics;
  scene.depth = DepthImage(cam.width, cam.height, 0.0);
  scene.part_labels.assign(static_cast<std::size_t>(cam.width) * cam.height, -1);
  const Vec3 origin = cam.extrinsic.translation;
  for (int v = 0; v < cam.height; ++v) {
    for (int u = 0; u < cam.width; ++u) {
      // Unit z in the camera frame, so the hit parameter is the depth.
      const Vec3 ray_cam((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
      const Vec3 dir = cam.extrinsic.rotate(ray_cam);
      double best = kNoHit;
      int label = -1;
      for (const Primitive& p : prims) {
        const double t = intersect(p, origin, dir);
        if (t < best) {
          best = t;
          label = p.part;
        }
      }
      if (label >= 0) {
        scene.depth.at(u, v) = best;
        scene.part_labels[static_cast<std::size_t>(v) * cam.width + u] = label;
        ++scene.parts[label].visible_pixels;
      }
    }
  }
  return scene;
}

SceneSpec random_scene_spec(std::uint64_t seed, const RandomSceneOptions& options,
                            const std::string& scene_id) {
  if (options.classes.empty() || options.min_objects < 1 ||
      options.max_objects < options.min_objects) {
    throw Error(ErrorCode::InvalidSpec, "invalid random scene options");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  SceneSpec spec;
  spec.scene_id = scene_id;
  spec.rng_seed = seed;

  const int count = options.min_objects +
                    static_cast<int>(unit(rng) * (options.max_objects - options.min_objects + 1));
  struct Footprint {
    Vec3 center;
    double radius;
  };
  std::vector<Footprint> taken;
  for (int i = 0; i < std::min(count, options.max_objects); ++i) {
    ObjectSpec obj;
    obj.object_class = options.classes[static_cast<std::size_t>(unit(rng) * options.classes.size()) %
                                       options.classes.size()];
    obj.dims = default_dims(obj.object_class);
    for (double* v : {&obj.dims.container_radius, &obj.dims.container_height,
                      &obj.dims.stir_length, &obj.dims.scoop_half_length,
                      &obj.dims.scoop_half_width}) {
      *v *= uniform(1.0 - options.dims_jitter, 1.0 + options.dims_jitter);
    }
    const double radius = footprint_radius(obj);
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const double yaw = uniform(0.0, 2.0 * std::numbers::pi);
      obj.pose.rotation = Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix();
      const double e = options.workspace_half_extent;
      obj.pose.translation = Vec3(uniform(-e, e), uniform(-e, e), 0.0);
      const Vec3 c = obj.pose.apply(footprint_center(obj));
      placed = std::all_of(taken.begin(), taken.end(), [&](const Footprint& f) {
        return (f.center - c).head<2>().norm() > f.radius + radius + 0.01;
      });
      if (placed) taken.push_back({c, radius});
    }
    if (placed) spec.objects.push_back(obj);
  }

  const double azimuth = uniform(0.0, 2.0 * std::numbers::pi);
  const double elevation = uniform(40.0, 60.0) * kRadPerDeg;
  const double distance = uniform(0.7, 0.8);
  const Vec3 eye(distance * std::cos(elevation) * std::cos(azimuth),
                 distance * std::cos(elevation) * std::sin(azimuth),
                 distance * std::sin(elevation));
  spec.camera.extrinsic = look_at(eye, Vec3(0, 0, 0.03));
  return spec;
}

namespace {

std::size_t partner_of(const Scene& scene, std::size_t part) {
  const ScenePart& p = scene.parts[part];
  for (std::size_t j = 0; j < scene.parts.size(); ++j) {
    if (j == part || scene.parts[j].object_index != p.object_index) continue;
    const PartClass q = scene.parts[j].part_class;
    if (is_compatible(p.part_class, q) || is_compatible(q, p.part_class)) return j;
  }
  return part;
}

Vec2 paf_target(const Scene& scene, std::size_t part) {
  const auto& k = scene.spec.camera.intrinsics;
  const ScenePart& p = scene.parts[part];
  const std::size_t other = partner_of(scene, part);
  const Vec3 to = other != part ? scene.parts[other].acf.keypoint()
                                : Vec3(p.acf.keypoint() + 0.05 * p.acf.axis());
  try {
    const Vec2 d = project(to, k) - project(p.acf.keypoint(), k);
    if (d.norm() > 1e-9) return d.normalized();
  } catch (const Error&) {
  }
  return Vec2::UnitX();
}

Vec3 foot_on_axis(const Vec3& x, const Vec3& e1, const Vec3& n) { return e1 + (x - e1).dot(n) * n; }

}  // namespace

PredictionBundle emulate_predictions(const Scene& scene, const NoiseModel& noise,
                                     std::uint64_t rng_seed, const EmulationConfig& config) {
  noise.validate();
  const auto& cam = scene.spec.camera;
  PredictionBundle bundle;
  bundle.scene_id = scene.spec.scene_id;
  bundle.camera = cam;
  bundle.gravity = scene.spec.gravity;

  for (std::size_t pi = 0; pi < scene.parts.size(); ++pi) {
    const ScenePart& part = scene.parts[pi];
    if (part.visible_pixels == 0) continue;

    int umin = cam.width, vmin = cam.height, umax = -1, vmax = -1;
    for (int v = 0; v < cam.height; ++v) {
      for (int u = 0; u < cam.width; ++u) {
        if (scene.part_labels[static_cast<std::size_t>(v) * cam.width + u] != static_cast<int>(pi)) {
          continue;
        }
        umin = std::min(umin, u);
        umax = std::max(umax, u);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
      }
    }

    RoiPrediction roi;
    roi.part_class = part.part_class;
    roi.roi = {umin - 0.5, vmin - 0.5, umax + 0.5, vmax + 0.5};
    roi.seeds = sample_seeds(roi.roi, scene.depth, cam.intrinsics, config.grid_n);
    const std::size_t n = roi.seeds.size();

    std::vector<double> true_mask(n, 0.0);
    int masked = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Seed& s = roi.seeds.seeds[i];
      const int u = std::clamp(static_cast<int>(std::lround(s.pixel_uv.x())), 0, cam.width - 1);
      const int v = std::clamp(static_cast<int>(std::lround(s.pixel_uv.y())), 0, cam.height - 1);
      if (scene.part_labels[static_cast<std::size_t>(v) * cam.width + u] == static_cast<int>(pi)) {
        true_mask[i] = 1.0;
        if (s.valid) ++masked;
      }
    }
    if (masked < config.min_masked_seeds) continue;

    roi.score = std::clamp(static_cast<double>(masked) / static_cast<double>(n), 0.05, 1.0);
    roi.truth = {part.acf, part.endpoint1, part.endpoint2, part.object_index, pi};
    roi.paf_target_star = paf_target(scene, pi);

    const Vec3 kp = part.acf.keypoint();
    const Vec3 axis = part.acf.axis();
    const double axis_len = (part.endpoint2 - part.endpoint1).norm();

    // One stream per ROI; every seed consumes the same number of draws
    // whatever the noise levels, so sweeps over one parameter stay aligned.
    std::seed_seq seq{static_cast<std::uint32_t>(rng_seed), static_cast<std::uint32_t>(rng_seed >> 32),
                      static_cast<std::uint32_t>(bundle.rois.size()), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto perturb = [&](const Vec3& target, const Vec3& from, bool* outlier) {
      const Vec3 z(gauss(rng), gauss(rng), gauss(rng));
      const bool is_outlier = unit(rng) < noise.outlier_fraction;
      const Vec3 box(unit(rng) - 0.5, unit(rng) - 0.5, unit(rng) - 0.5);
      if (outlier) *outlier = is_outlier;
      if (is_outlier) return Vec3(target + noise.outlier_box * box - from);
      return Vec3(target - from + noise.offset_sigma * z);
    };

    roi.keypoint_offsets.offsets.resize(n);
    roi.endpoint_offsets.offsets.resize(n);
    roi.scatter_offsets.offsets.resize(n);
    roi.axis_vectors.resize(n);
    roi.paf.resize(n);
    roi.labels.logits.resize(n);
    roi.labels.labels_star.resize(n);
    roi.keypoint_outlier.resize(n);
    roi.mask.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 x = roi.seeds.seeds[i].point3d;
      bool outlier = false;
      roi.keypoint_offsets.offsets[i] = perturb(kp, x, &outlier);
      roi.keypoint_outlier[i] = outlier;
      roi.endpoint_offsets.offsets[i][0] = perturb(part.endpoint1, x, nullptr);
      roi.endpoint_offsets.offsets[i][1] = perturb(part.endpoint2, x, nullptr);
      const Vec3 foot = foot_on_axis(x, part.endpoint1, axis);
      roi.scatter_offsets.offsets[i] = perturb(foot, x, nullptr);

      const Vec3 zv(gauss(rng), gauss(rng), gauss(rng));
      roi.axis_vectors[i] = axis + noise.vector_sigma * zv;

      const double angle = noise.paf_angle_sigma * kRadPerDeg * gauss(rng);
      roi.paf[i] = Eigen::Rotation2Dd(angle) * roi.paf_target_star;

      // Logits grow with the distance from the axis midpoint, 1 per cm.
      const double along = (x - part.endpoint1).dot(axis) - axis_len / 2;
      const int head = along > 0.0 ? 1 : 0;
      roi.labels.labels_star[i] = head;
      roi.labels.logits[i] = along * 100.0;

      const bool flip = unit(rng) < noise.mask_flip_prob;
      roi.mask.weights[i] = flip ? 1.0 - true_mask[i] : true_mask[i];
    }
    bundle.rois.push_back(std::move(roi));
  }
  return bundle;
}

RoiTargets exact_targets(const RoiPrediction& roi) {
  RoiTargets t;
  const std::size_t n = roi.seeds.size();
  t.keypoint_offsets.offsets.resize(n);
  t.endpoint_offsets.offsets.resize(n);
  t.scatter_offsets.offsets.resize(n);
  const Vec3 axis = roi.truth.acf.axis();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 x = roi.seeds.seeds[i].point3d;
    t.keypoint_offsets.offsets[i] = roi.truth.acf.keypoint() - x;
    t.endpoint_offsets.offsets[i] = {roi.truth.endpoint1 - x, roi.truth.endpoint2 - x};
    t.scatter_offsets.offsets[i] = foot_on_axis(x, roi.truth.endpoint1, axis) - x;
  }
  return t;
}

}  // namespace acf
