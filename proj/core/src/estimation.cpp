#include "acf/estimation.hpp"

#include "acf/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace acf {

void MeanShiftConfig::validate() const {
  if (!(bandwidth > 0.0)) throw Error(ErrorCode::InvalidArgument, "bandwidth must be > 0");
  if (!(convergence_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "convergence tolerance must be > 0");
  }
  if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  if (!(merge_radius >= 0.0)) throw Error(ErrorCode::InvalidArgument, "merge_radius must be >= 0");
}

void RansacConfig::validate() const {
  if (iterations < 1) throw Error(ErrorCode::InvalidArgument, "RANSAC iterations must be >= 1");
  if (!(inlier_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "inlier threshold must be > 0");
  }
  if (!(min_inlier_fraction >= 0.0 && min_inlier_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "min_inlier_fraction must lie in [0, 1]");
  }
}

std::string_view to_string(AxisMethod m) noexcept {
  switch (m) {
    case AxisMethod::Endpoints: return "endpoints";
    case AxisMethod::Vector: return "vector";
    case AxisMethod::ScatterLine: return "scatterline";
  }
  return "?";
}

AxisMethod axis_method_from_string(std::string_view name) {
  for (AxisMethod m : {AxisMethod::Endpoints, AxisMethod::Vector, AxisMethod::ScatterLine}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown axis method '" + std::string(name) + "'");
}

VoterSet form_voters(const SeedGrid& seeds, const OffsetField& offsets, const MaskWeights& mask,
                     double threshold) {
  if (offsets.size() != seeds.size() || mask.size() != seeds.size()) {
    throw Error(ErrorCode::InvalidArgument, "seed, offset and mask counts differ");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "mask threshold must lie in [0, 1]");
  }
  VoterSet voters;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (!seeds.seeds[i].valid || mask.weights[i] < threshold) continue;
    voters.points.push_back(seeds.seeds[i].point3d + offsets.offsets[i]);
    voters.source_seed.push_back(i);
  }
  if (voters.empty()) throw Error(ErrorCode::NoValidSeeds, "no valid seed inside the mask");
  return voters;
}

double kernel_density(std::span<const Vec3> voters, const Vec3& x, double bandwidth) {
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  double density = 0.0;
  for (const Vec3& p : voters) density += std::exp(-(x - p).squaredNorm() * inv);
  return density;
}

namespace {

Vec3 shift_until_converged(std::span<const Vec3> voters, Vec3 x, const MeanShiftConfig& config) {
  const double inv = 1.0 / (2.0 * config.bandwidth * config.bandwidth);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    Vec3 num = Vec3::Zero();
    double den = 0.0;
    for (const Vec3& p : voters) {
      const double w = std::exp(-(x - p).squaredNorm() * inv);
      num += w * p;
      den += w;
    }
    if (den <= 0.0) break;
    const Vec3 next = num / den;
    const double step = (next - x).norm();
    x = next;
    if (step < config.convergence_tol) break;
  }
  return x;
}

bool lexicographically_less(const Vec3& a, const Vec3& b) {
  return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
}

struct Mode {
  Vec3 sum = Vec3::Zero();
  Vec3 center = Vec3::Zero();
  int count = 0;
};

}  // namespace

Vec3 mean_shift_mode(const VoterSet& voters, const MeanShiftConfig& config) {
  config.validate();
  if (voters.empty()) throw Error(ErrorCode::NoValidSeeds, "mean shift needs at least one voter");
  const std::span<const Vec3> points(voters.points);
  if (points.size() == 1) return points.front();

  std::vector<Mode> modes;
  for (const Vec3& start : points) {
    const Vec3 converged = shift_until_converged(points, start, config);
    auto it = std::find_if(modes.begin(), modes.end(), [&](const Mode& m) {
      return (m.center - converged).norm() <= config.merge_radius;
    });
    if (it == modes.end()) {
      modes.push_back({converged, converged, 1});
    } else {
      it->sum += converged;
      ++it->count;
      it->center = it->sum / it->count;
    }
  }

  const Mode* best = nullptr;
  Vec3 best_point = Vec3::Zero();
  double best_density = 0.0;
  for (const Mode& m : modes) {
    const Vec3 refined = shift_until_converged(points, m.center, config);
    const double density = kernel_density(points, refined, config.bandwidth);
    bool better = best == nullptr || m.count > best->count;
    if (!better && m.count == best->count) {
      better = density > best_density ||
               (density == best_density && lexicographically_less(refined, best_point));
    }
    if (better) {
      best = &m;
      best_point = refined;
      best_density = density;
    }
  }
  return best_point;
}

Vec3 estimate_keypoint(const SeedGrid& seeds, const OffsetField& offsets,
                       const MaskWeights& mask, const MeanShiftConfig& config, double threshold) {
  return mean_shift_mode(form_voters(seeds, offsets, mask, threshold), config);
}

AxisEstimate estimate_axis_endpoints(const SeedGrid& seeds,
                                     const EndpointOffsetField& endpoint_offsets,
                                     const MaskWeights& mask, const MeanShiftConfig& config,
                                     double threshold) {
  const Vec3 e1 = estimate_keypoint(seeds, endpoint_offsets.channel(0), mask, config, threshold);
  const Vec3 e2 = estimate_keypoint(seeds, endpoint_offsets.channel(1), mask, config, threshold);
  const Vec3 link = e2 - e1;
  const double length = link.norm();
  if (length < 1e-6) throw Error(ErrorCode::DegenerateAxis, "voted endpoints coincide");
  return {e1, link / length, AxisMethod::Endpoints};
}

AxisEstimate estimate_axis_vector(std::span<const Vec3> per_seed_vectors,
                                  const MaskWeights& mask, const Vec3& origin, double threshold) {
  if (per_seed_vectors.size() != mask.size()) {
    throw Error(ErrorCode::InvalidArgument, "vector and mask counts differ");
  }
  Vec3 sum = Vec3::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double m = mask.weights[i];
    if (m < threshold || m == 0.0) continue;
    sum += m * per_seed_vectors[i];
    total += m;
  }
  if (total <= 0.0) throw Error(ErrorCode::EmptyMask, "no seed inside the mask");
  const Vec3 mean = sum / total;
  const double norm = mean.norm();
  if (norm < 1e-9) throw Error(ErrorCode::DegenerateAxis, "direction vectors cancel out");
  return {origin, mean / norm, AxisMethod::Vector};
}

double point_line_distance(const Vec3& p, const Vec3& origin, const Vec3& unit_direction) {
  return (p - origin).cross(unit_direction).norm();
}

LineFit fit_line_tls(std::span<const Vec3> points) {
  if (points.size() < 2) throw Error(ErrorCode::RansacFailure, "line fit needs two points");
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Mat3 scatter = Mat3::Zero();
  for (const Vec3& p : points) {
    const Vec3 d = p - centroid;
    scatter += d * d.transpose();
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> solver(scatter);
  if (solver.info() != Eigen::Success || !(solver.eigenvalues()(2) > 1e-18)) {
    throw Error(ErrorCode::RansacFailure, "points are coincident");
  }
  return {centroid, solver.eigenvectors().col(2).normalized()};
}

namespace {

std::vector<std::size_t> inliers_of(std::span<const Vec3> pts, const Vec3& origin,
                                    const Vec3& dir, double threshold) {
  std::vector<std::size_t> in;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (point_line_distance(pts[i], origin, dir) <= threshold) in.push_back(i);
  }
  return in;
}

std::vector<Vec3> gather(std::span<const Vec3> pts, const std::vector<std::size_t>& idx) {
  std::vector<Vec3> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pts[i]);
  return out;
}

}  // namespace

AxisEstimate estimate_axis_scatterline(const SeedGrid& seeds, const OffsetField& offsets,
                                       const LabelPrediction& labels, const MaskWeights& mask,
                                       const RansacConfig& ransac, double threshold) {
  ransac.validate();
  if (labels.logits.size() != seeds.size()) {
    throw Error(ErrorCode::InvalidArgument, "label and seed counts differ");
  }
  const VoterSet voters = form_voters(seeds, offsets, mask, threshold);
  const std::span<const Vec3> pts(voters.points);
  const std::size_t n = pts.size();
  if (n < 2) throw Error(ErrorCode::RansacFailure, "fewer than two voters");

  std::mt19937_64 rng(ransac.rng_seed);
  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::uniform_int_distribution<std::size_t> second(0, n - 2);

  // Hypotheses are ranked by truncated squared distance (MSAC) so that a
  // line grazing a stray far voter does not beat a tighter fit.
  const double t2 = ransac.inlier_threshold * ransac.inlier_threshold;
  std::vector<std::size_t> best;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int it = 0; it < ransac.iterations; ++it) {
    const std::size_t a = first(rng);
    std::size_t b = second(rng);
    if (b >= a) ++b;
    const Vec3 link = pts[b] - pts[a];
    const double length = link.norm();
    if (length < 1e-9) continue;
    const Vec3 dir = link / length;
    double cost = 0.0;
    for (const Vec3& p : pts) cost += std::min(t2, std::pow(point_line_distance(p, pts[a], dir), 2));
    if (cost < best_cost) {
      best_cost = cost;
      best = inliers_of(pts, pts[a], dir, ransac.inlier_threshold);
    }
  }
  const double fraction = static_cast<double>(best.size()) / static_cast<double>(n);
  if (best.size() < 2 || fraction < ransac.min_inlier_fraction) {
    throw Error(ErrorCode::RansacFailure,
                "best hypothesis explains " + std::to_string(best.size()) + " of " +
                    std::to_string(n) + " voters");
  }

  LineFit line = fit_line_tls(gather(pts, best));
  for (int round = 0; round < 10; ++round) {
    auto refined = inliers_of(pts, line.centroid, line.direction, ransac.inlier_threshold);
    if (refined == best || refined.size() < 2) break;
    best = std::move(refined);
    line = fit_line_tls(gather(pts, best));
  }

  // Pairwise majority: head-labeled voters should project further along the
  // axis than tail-labeled ones. With a single label group the logit trend
  // along the line decides.
  std::vector<double> proj(best.size());
  for (std::size_t k = 0; k < best.size(); ++k) proj[k] = (pts[best[k]] - line.centroid).dot(line.direction);
  auto logit = [&](std::size_t k) { return labels.logits[voters.source_seed[best[k]]]; };
  long long votes = 0;
  for (std::size_t a = 0; a < best.size(); ++a) {
    if (!(logit(a) > 0.0)) continue;
    for (std::size_t b = 0; b < best.size(); ++b) {
      if (logit(b) > 0.0) continue;
      votes += (proj[a] > proj[b]) - (proj[a] < proj[b]);
    }
  }
  bool flip = votes < 0;
  if (votes == 0) {
    double mean_l = 0.0, mean_s = 0.0;
    for (std::size_t k = 0; k < best.size(); ++k) {
      mean_l += logit(k);
      mean_s += proj[k];
    }
    mean_l /= static_cast<double>(best.size());
    mean_s /= static_cast<double>(best.size());
    double cov = 0.0;
    for (std::size_t k = 0; k < best.size(); ++k) cov += (logit(k) - mean_l) * (proj[k] - mean_s);
    flip = cov < 0.0;
  }
  return {line.centroid, flip ? Vec3(-line.direction) : line.direction, AxisMethod::ScatterLine};
}

}  // namespace acf
