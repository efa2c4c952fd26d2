#include "acf/manipulation.hpp"

#include "acf/error.hpp"

#include <cmath>

namespace acf {

namespace {

const double kParallelSin = std::sin(1.0 * kRadPerDeg);

Mat3 columns(const Vec3& a, const Vec3& b, const Vec3& c) {
  Mat3 m;
  m.col(0) = a;
  m.col(1) = b;
  m.col(2) = c;
  return m;
}

Vec3 unit_or_throw(const Vec3& v, const char* what) {
  const double n = v.norm();
  if (!(n > 1e-12)) throw Error(ErrorCode::DegenerateFrame, what);
  return v / n;
}

// Frame with green along `green` and blue as close to `blue_hint` as
// orthogonality allows; columns (red, green, blue).
GraspPose frame_from_green_and_blue(const Vec3& position, const Vec3& green,
                                    const Vec3& blue_hint) {
  const Vec3 r = green.cross(blue_hint);
  if (r.norm() < 1e-6) {
    throw Error(ErrorCode::DegenerateFrame, "approach direction parallel to the part axis");
  }
  const Vec3 red = r.normalized();
  const Vec3 blue = red.cross(green);
  return {position, columns(red, green, blue)};
}

Vec3 horizontal(const Vec3& v, const Vec3& up) { return v - v.dot(up) * up; }

}  // namespace

std::vector<double> PourParams::default_tilt_profile() {
  std::vector<double> tilt(10);
  for (int i = 0; i < 10; ++i) tilt[i] = 120.0 * i / 9.0;
  return tilt;
}

void PourParams::validate() const {
  if (!(height > 0.0)) throw Error(ErrorCode::InvalidArgument, "pour height H must be > 0");
  if (!(radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pour radius R must be >= 0");
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "pour steps must be >= 2");
  if (tilt_profile_deg.empty()) throw Error(ErrorCode::InvalidArgument, "empty tilt profile");
}

std::vector<Waypoint> Trajectory::phase(int p) const {
  std::vector<Waypoint> out;
  for (const auto& w : waypoints) {
    if (w.phase == p) out.push_back(w);
  }
  return out;
}

GraspPose grasp_mug(const Acf& handle, const Acf& container) {
  const Vec3 cross = handle.axis().cross(container.axis());
  if (cross.norm() < kParallelSin) {
    throw Error(ErrorCode::DegenerateFrame, "handle and container axes are parallel");
  }
  Vec3 blue = cross.normalized();
  if ((handle.keypoint() - container.keypoint()).dot(blue) < -1e-9) blue = -blue;
  const Vec3& green = container.axis();
  const Vec3 red = green.cross(blue);
  return {handle.keypoint(), columns(red, green, blue)};
}

GraspPose grasp_bottle(const Acf& container, const Vec3& approach_from, const Vec3& up) {
  const Vec3 u = unit_or_throw(up, "zero up vector");
  const Vec3 side = horizontal(approach_from, u);
  if (side.norm() < 1e-9) {
    throw Error(ErrorCode::DegenerateFrame, "approach direction has no horizontal component");
  }
  return frame_from_green_and_blue(container.keypoint(), container.axis(), -side.normalized());
}

GraspPose grasp_spoon(const Acf& stir, const Acf& /*scoop*/, const Vec3& approach_from) {
  const Vec3 toward = -unit_or_throw(approach_from, "zero approach direction");
  return frame_from_green_and_blue(stir.keypoint(), stir.axis(), toward);
}

Vec3 approach_from_base(const Vec3& keypoint, const Vec3& base_point, const Vec3& up) {
  const Vec3 u = unit_or_throw(up, "zero up vector");
  const Vec3 side = horizontal(base_point - keypoint, u);
  if (side.norm() < 1e-9) {
    throw Error(ErrorCode::DegenerateFrame, "robot base lies directly above the keypoint");
  }
  return side.normalized();
}

Trajectory pour_trajectory(const Acf& source, const Acf& target, const PourParams& params,
                           const Vec3& up) {
  params.validate();
  const Vec3 u = unit_or_throw(up, "zero up vector");
  if (target.axis().dot(u) < std::cos(30.0 * kRadPerDeg)) {
    throw Error(ErrorCode::PreconditionViolation, "pour target is tilted more than 30 degrees");
  }

  // Unit horizontal direction from the target toward the source.
  Vec3 away = horizontal(source.keypoint() - target.keypoint(), u);
  away = away.norm() > 1e-9 ? Vec3(away.normalized()) : Vec3(u.unitOrthogonal());

  const Vec3 x = -away;
  const Vec3 y = u.cross(x);
  const Mat3 upright = columns(x, y, u);
  const Vec3 pivot = target.keypoint() + params.height * u;
  const Vec3 pre_pour = pivot + params.radius * away;

  Trajectory traj;
  for (int k = 0; k < params.steps; ++k) {
    const double s = static_cast<double>(k) / (params.steps - 1);
    traj.waypoints.push_back({source.keypoint() + s * (pre_pour - source.keypoint()), upright, 1});
  }
  // Rigid rotation about the pivot, tipping the axis toward the target.
  for (double tilt : params.tilt_profile_deg) {
    const Mat3 rot = Eigen::AngleAxisd(tilt * kRadPerDeg, y).toRotationMatrix();
    traj.waypoints.push_back({pivot + rot * (params.radius * away), rot * upright, 2});
  }
  return traj;
}

Trajectory stir_trajectory(const Acf& stir, const Acf& scoop, const Acf& container, double stroke,
                           int steps, double descent_height, const Vec3& up) {
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "stir steps must be >= 2");
  const Vec3 u = unit_or_throw(up, "zero up vector");

  const Vec3 scoop_perp = scoop.axis() - scoop.axis().dot(stir.axis()) * stir.axis();
  if (scoop_perp.norm() < 1e-6) {
    throw Error(ErrorCode::DegenerateFrame, "scoop axis parallel to the stir axis");
  }
  const Vec3 s = scoop_perp.normalized();
  const Mat3 body = columns(stir.axis(), s, stir.axis().cross(s));

  // Head down: the stir axis is brought onto the downward container axis.
  const Mat3 rot = Eigen::Quaterniond::FromTwoVectors(stir.axis(), -container.axis())
                       .normalized()
                       .toRotationMatrix();
  const Mat3 frame = rot * body;

  const Vec3 stir_dir = horizontal(rot * scoop.axis(), u);
  if (stir_dir.norm() < 1e-6) {
    throw Error(ErrorCode::DegenerateFrame, "scoop axis is vertical; no horizontal stir direction");
  }
  const Vec3 along = stir_dir.normalized();

  const Vec3 reach = rot * (scoop.keypoint() - stir.keypoint());
  const Vec3 bottom = container.keypoint() - reach;
  const Vec3 top = bottom + descent_height * u;

  Trajectory traj;
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    traj.waypoints.push_back({k + 1 == steps ? bottom : Vec3(top + t * (bottom - top)), frame, 1});
  }
  for (int k = 0; k < steps; ++k) {
    const double phase = 2.0 * std::numbers::pi * k / (steps - 1);
    traj.waypoints.push_back({bottom + stroke * std::sin(phase) * along, frame, 2});
  }
  return traj;
}

PourOutcome pour_success(double delta_c1, double delta_c2) {
  if (delta_c2 == 0.0) throw Error(ErrorCode::DivisionByZero, "source mass change is zero");
  const double r = std::abs(delta_c1) / std::abs(delta_c2);
  return {r, r >= kPourSuccessRatio};
}

bool stir_success(double positional_error) {
  if (!(positional_error >= 0.0)) {
    throw Error(ErrorCode::PreconditionViolation, "positional error must be >= 0");
  }
  return positional_error < kStirSuccessError;
}

}  // namespace acf
