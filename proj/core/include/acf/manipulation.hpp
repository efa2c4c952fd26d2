#pragma once

#include "acf/geometry.hpp"
#include "acf/taxonomy.hpp"

#include <vector>

namespace acf {

inline const Vec3 kWorldUp = Vec3::UnitZ();

// Gripper frame; columns are the red, green and blue gripper axes.
struct GraspPose {
  Vec3 position = Vec3::Zero();
  Mat3 axes = Mat3::Identity();

  Vec3 red() const { return axes.col(0); }
  Vec3 green() const { return axes.col(1); }
  Vec3 blue() const { return axes.col(2); }
};

struct PourParams {
  double height = 0.15;  // H
  double radius = 0.05;  // R
  std::vector<double> tilt_profile_deg = default_tilt_profile();
  int steps = 10;

  static std::vector<double> default_tilt_profile();
  void validate() const;
};

struct Waypoint {
  Vec3 position = Vec3::Zero();
  Mat3 frame = Mat3::Identity();
  int phase = 1;
};

struct Trajectory {
  std::vector<Waypoint> waypoints;

  std::vector<Waypoint> phase(int p) const;
};

struct PourOutcome {
  double ratio = 0.0;
  bool success = false;
};

inline constexpr double kPourSuccessRatio = 0.7;
inline constexpr double kStirSuccessError = 0.02;

/// Grasp at the handle keypoint: green along the container axis, blue
/// orthogonal to both axes. Throws DegenerateFrame when the axes are
/// parallel within 1 degree.
GraspPose grasp_mug(const Acf& handle, const Acf& container);

/// Grasp at the container keypoint with green along its axis. `approach_from`
/// points from the keypoint toward the side the gripper arrives from; its
/// horizontal part sets blue, which points back at the keypoint.
GraspPose grasp_bottle(const Acf& container, const Vec3& approach_from, const Vec3& up = kWorldUp);

/// Grasp at the stir keypoint with green along the stir axis and blue
/// pointing at the keypoint from `approach_from`, orthogonalized against green.
GraspPose grasp_spoon(const Acf& stir, const Acf& scoop, const Vec3& approach_from);

/// Horizontal unit direction from `base_point` toward `keypoint`, negated:
/// the default approach side for bottle and spoon grasps.
Vec3 approach_from_base(const Vec3& keypoint, const Vec3& base_point, const Vec3& up = kWorldUp);

/// Transport with the source container upright, then tilt it in the vertical
/// plane through both keypoints about the point H above the target keypoint.
/// Frames are container frames whose third column is the container axis.
Trajectory pour_trajectory(const Acf& source, const Acf& target, const PourParams& params = {},
                           const Vec3& up = kWorldUp);

/// Descend head-down with the stir axis along the container axis until the
/// scoop keypoint meets the container keypoint, then oscillate horizontally
/// along the scoop axis. Positions track the stir keypoint; frame columns
/// are (stir axis, scoop axis orthogonalized, their cross product).
Trajectory stir_trajectory(const Acf& stir, const Acf& scoop, const Acf& container,
                           double stroke = 0.03, int steps = 10, double descent_height = 0.15,
                           const Vec3& up = kWorldUp);

PourOutcome pour_success(double delta_c1, double delta_c2);
bool stir_success(double positional_error);

}  // namespace acf
