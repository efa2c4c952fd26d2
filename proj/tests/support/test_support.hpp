#pragma once

#include "acf/camera.hpp"
#include "acf/fields.hpp"
#include "acf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace acf::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double gauss(double sigma = 1.0) { return std::normal_distribution<double>(0.0, sigma)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Vec3 vec3(double lo = -1.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
  Vec3 gauss3(double sigma) { return {gauss(sigma), gauss(sigma), gauss(sigma)}; }
  Vec2 vec2(double lo = -1.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi)}; }

  Vec3 unit3() {
    Vec3 v;
    do {
      v = gauss3(1.0);
    } while (v.norm() < 1e-3);
    return v.normalized();
  }

  Mat3 rotation() {
    const Vec3 axis = unit3();
    return Eigen::AngleAxisd(uniform(0.0, 2.0 * M_PI), axis).toRotationMatrix();
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// A seed grid whose seeds are all valid and sit at the given points.
inline SeedGrid grid_at(const std::vector<Vec3>& points) {
  SeedGrid g;
  g.n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(points.size()))));
  for (const Vec3& p : points) g.seeds.push_back({Vec2::Zero(), p.z(), p, true});
  return g;
}

inline MaskWeights full_mask(std::size_t n) { return {std::vector<double>(n, 1.0)}; }

inline double angle_deg(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / M_PI;
}

}  // namespace acf::testing
