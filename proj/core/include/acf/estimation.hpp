#pragma once

#include "acf/camera.hpp"
#include "acf/fields.hpp"
#include "acf/geometry.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace acf {

inline constexpr double kDefaultMaskThreshold = 0.5;

struct VoterSet {
  std::vector<Vec3> points;
  std::vector<std::size_t> source_seed;

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
};

struct MeanShiftConfig {
  double bandwidth = 0.03;
  int max_iterations = 50;
  double convergence_tol = 1e-5;
  double merge_radius = 0.015;

  void validate() const;
};

enum class AxisMethod { Endpoints, Vector, ScatterLine };

std::string_view to_string(AxisMethod m) noexcept;
AxisMethod axis_method_from_string(std::string_view name);

struct AxisEstimate {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
  AxisMethod kind = AxisMethod::Endpoints;
};

struct RansacConfig {
  int iterations = 200;
  double inlier_threshold = 0.01;
  double min_inlier_fraction = 0.3;
  std::uint64_t rng_seed = 7;

  void validate() const;
};

/// voter = seed.point3d + t_i for every valid seed with M_i >= threshold.
/// Throws NoValidSeeds if no seed qualifies.
VoterSet form_voters(const SeedGrid& seeds, const OffsetField& offsets, const MaskWeights& mask,
                     double threshold = kDefaultMaskThreshold);

/// Gaussian kernel density (unnormalized) of `voters` at `x`.
double kernel_density(std::span<const Vec3> voters, const Vec3& x, double bandwidth);

/// Mean Shift started from every voter; converged points within
/// merge_radius are merged and the mode with the largest basin wins. Ties
/// go to the higher kernel density at the mode, then lexicographic order.
Vec3 mean_shift_mode(const VoterSet& voters, const MeanShiftConfig& config = {});

Vec3 estimate_keypoint(const SeedGrid& seeds, const OffsetField& offsets,
                       const MaskWeights& mask, const MeanShiftConfig& config = {},
                       double threshold = kDefaultMaskThreshold);

/// Votes both endpoints; direction = normalize(e2 - e1), origin = e1.
/// Throws DegenerateAxis when the endpoints are closer than 1e-6 m.
AxisEstimate estimate_axis_endpoints(const SeedGrid& seeds,
                                     const EndpointOffsetField& endpoint_offsets,
                                     const MaskWeights& mask, const MeanShiftConfig& config = {},
                                     double threshold = kDefaultMaskThreshold);

/// Mask-weighted mean of per-seed direction vectors, anchored at `origin`.
AxisEstimate estimate_axis_vector(std::span<const Vec3> per_seed_vectors,
                                  const MaskWeights& mask, const Vec3& origin,
                                  double threshold = kDefaultMaskThreshold);

/// Robust 3D line through the scatter voters (RANSAC + total least
/// squares); the sign follows the closer-endpoint labels.
AxisEstimate estimate_axis_scatterline(const SeedGrid& seeds, const OffsetField& offsets,
                                       const LabelPrediction& labels, const MaskWeights& mask,
                                       const RansacConfig& ransac = {},
                                       double threshold = kDefaultMaskThreshold);

struct LineFit {
  Vec3 centroid = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();
};

/// Principal direction of the points (orthogonal least squares).
LineFit fit_line_tls(std::span<const Vec3> points);

double point_line_distance(const Vec3& p, const Vec3& origin, const Vec3& unit_direction);

}  // namespace acf
