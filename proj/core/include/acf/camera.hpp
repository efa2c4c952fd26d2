#pragma once

#include "acf/geometry.hpp"

#include <cstddef>
#include <vector>

namespace acf {

inline constexpr int kDefaultSeedGridSide = 14;

// Pinhole intrinsics. Pixel (u, v) with integer coordinates is the center
// of the pixel stored at column u, row v.
struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  void validate() const;
};

struct Roi {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  void validate() const;
  double width() const noexcept { return x_max - x_min; }
  double height() const noexcept { return y_max - y_min; }
};

// Row-major depth in meters; 0 marks missing depth.
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  DepthImage() = default;
  DepthImage(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

  double at(int u, int v) const { return values[static_cast<std::size_t>(v) * width + u]; }
  double& at(int u, int v) { return values[static_cast<std::size_t>(v) * width + u]; }
  bool contains(int u, int v) const noexcept { return u >= 0 && v >= 0 && u < width && v < height; }
  void validate() const;
};

struct Seed {
  Vec2 pixel_uv = Vec2::Zero();
  double depth = 0.0;
  Vec3 point3d = Vec3::Zero();
  bool valid = false;
};

struct SeedGrid {
  int n = 0;
  std::vector<Seed> seeds;  // row-major over the n x n subdivision

  std::size_t size() const noexcept { return seeds.size(); }
};

/// ((u - cx) d / fx, (v - cy) d / fy, d). Throws NonPositiveDepth if d <= 0.
Vec3 backproject(const Vec2& uv, double depth, const CameraIntrinsics& k);

/// Forward pinhole projection. Throws NonPositiveDepth for points at or
/// behind the image plane.
Vec2 project(const Vec3& point, const CameraIntrinsics& k);

/// Bilinear depth lookup. Returns 0 when any neighbour with non-zero
/// interpolation weight is missing or outside the image.
double interpolate_depth(const DepthImage& depth, const Vec2& uv);

/// Samples seeds at the centers of an n x n subdivision of `roi`.
SeedGrid sample_seeds(const Roi& roi, const DepthImage& depth, const CameraIntrinsics& k,
                      int n = kDefaultSeedGridSide);

}  // namespace acf
