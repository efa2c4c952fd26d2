#include "acf/camera.hpp"

#include "acf/error.hpp"

#include <cmath>
#include <string>

namespace acf {

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive");
  }
  if (!std::isfinite(cx) || !std::isfinite(cy)) {
    throw Error(ErrorCode::InvalidArgument, "principal point must be finite");
  }
}

void Roi::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw Error(ErrorCode::InvalidArgument, "ROI must have positive extent");
  }
}

void DepthImage::validate() const {
  if (width <= 0 || height <= 0) throw Error(ErrorCode::InvalidArgument, "empty depth image");
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidArgument, "depth buffer size does not match width x height");
  }
  for (double d : values) {
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw Error(ErrorCode::InvalidArgument, "depth values must be finite and non-negative");
    }
  }
}

Vec3 backproject(const Vec2& uv, double depth, const CameraIntrinsics& k) {
  if (!(depth > 0.0)) {
    throw Error(ErrorCode::NonPositiveDepth, "depth " + std::to_string(depth));
  }
  return {(uv.x() - k.cx) * depth / k.fx, (uv.y() - k.cy) * depth / k.fy, depth};
}

Vec2 project(const Vec3& point, const CameraIntrinsics& k) {
  if (!(point.z() > 0.0)) {
    throw Error(ErrorCode::NonPositiveDepth, "point behind the camera");
  }
  return {k.fx * point.x() / point.z() + k.cx, k.fy * point.y() / point.z() + k.cy};
}

double interpolate_depth(const DepthImage& depth, const Vec2& uv) {
  const double fu = std::floor(uv.x());
  const double fv = std::floor(uv.y());
  const double au = uv.x() - fu;
  const double av = uv.y() - fv;
  const int u0 = static_cast<int>(fu);
  const int v0 = static_cast<int>(fv);

  const double weights[4] = {(1 - au) * (1 - av), au * (1 - av), (1 - au) * av, au * av};
  const int du[4] = {0, 1, 0, 1};
  const int dv[4] = {0, 0, 1, 1};

  double value = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (weights[i] == 0.0) continue;
    const int u = u0 + du[i];
    const int v = v0 + dv[i];
    if (!depth.contains(u, v)) return 0.0;
    const double d = depth.at(u, v);
    if (d <= 0.0) return 0.0;
    value += weights[i] * d;
  }
  return value;
}

SeedGrid sample_seeds(const Roi& roi, const DepthImage& depth, const CameraIntrinsics& k, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "seed grid side must be >= 1");
  roi.validate();
  k.validate();
  // Pixel centers sit at integer coordinates, so the image covers
  // [-0.5, width - 0.5] x [-0.5, height - 0.5].
  if (roi.x_max <= -0.5 || roi.y_max <= -0.5 || roi.x_min >= depth.width - 0.5 ||
      roi.y_min >= depth.height - 0.5) {
    throw Error(ErrorCode::RoiOutOfImage, "ROI does not intersect the image");
  }

  SeedGrid grid;
  grid.n = n;
  grid.seeds.resize(static_cast<std::size_t>(n) * n);
  const double step_x = roi.width() / n;
  const double step_y = roi.height() / n;
  for (int row = 0; row < n; ++row) {
    for (int col = 0; col < n; ++col) {
      Seed& s = grid.seeds[static_cast<std::size_t>(row) * n + col];
      s.pixel_uv = {roi.x_min + (col + 0.5) * step_x, roi.y_min + (row + 0.5) * step_y};
      s.depth = interpolate_depth(depth, s.pixel_uv);
      s.valid = s.depth > 0.0;
      if (s.valid) s.point3d = backproject(s.pixel_uv, s.depth, k);
    }
  }
  return grid;
}

}  // namespace acf
