#include "acf/association.hpp"

#include "acf/error.hpp"

#include <algorithm>
#include <map>

namespace acf {

Vec2 mean_paf_direction(const PafField& field, double threshold) {
  if (field.vectors.size() != field.mask.size()) {
    throw Error(ErrorCode::InvalidArgument, "affinity vector and mask counts differ");
  }
  Vec2 sum = Vec2::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < field.vectors.size(); ++i) {
    const double m = field.mask.weights[i];
    if (m < threshold || m == 0.0) continue;
    sum += m * field.vectors[i];
    total += m;
  }
  if (total <= 0.0) throw Error(ErrorCode::EmptyMask, "no affinity vector inside the mask");
  const Vec2 mean = sum / total;
  if (mean.norm() < 1e-9) {
    throw Error(ErrorCode::DegenerateDirection, "affinity vectors cancel out");
  }
  return mean.normalized();
}

double score_pair(const PartInstance& source, const PartInstance& target,
                  const Vec2& source_paf_dir, const CameraIntrinsics& projector) {
  if (!is_compatible(source.part_class, target.part_class)) {
    throw Error(ErrorCode::PreconditionViolation, "parts are not compatible");
  }
  const Vec2 link = project(target.acf.keypoint(), projector) -
                    project(source.acf.keypoint(), projector);
  const double length = link.norm();
  if (length < 1e-6) throw Error(ErrorCode::DegenerateDirection, "projected keypoints coincide");
  const double dir_norm = source_paf_dir.norm();
  if (dir_norm < 1e-9) throw Error(ErrorCode::DegenerateDirection, "zero affinity direction");
  return std::clamp(source_paf_dir.dot(link) / (length * dir_norm), -1.0, 1.0);
}

std::vector<AssociationCandidate> pair_candidates(std::span<const PartInstance> parts,
                                                  std::span<const std::optional<Vec2>> paf_dirs,
                                                  const CameraIntrinsics& projector,
                                                  double min_score) {
  if (paf_dirs.size() != parts.size()) {
    throw Error(ErrorCode::InvalidArgument, "one affinity direction slot per part is required");
  }
  std::vector<AssociationCandidate> out;
  for (std::size_t s = 0; s < parts.size(); ++s) {
    if (!paf_dirs[s]) continue;
    for (std::size_t t = 0; t < parts.size(); ++t) {
      if (s == t || !is_compatible(parts[s].part_class, parts[t].part_class)) continue;
      double score = 0.0;
      try {
        score = score_pair(parts[s], parts[t], *paf_dirs[s], projector);
      } catch (const Error&) {
        continue;
      }
      if (score >= min_score) out.push_back({s, t, score});
    }
  }
  return out;
}

std::vector<AssociationCandidate> greedy_assignment(std::vector<AssociationCandidate> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.score > b.score; });
  std::set<std::size_t> used_source, used_target;
  std::vector<AssociationCandidate> chosen;
  for (const auto& c : candidates) {
    if (used_source.contains(c.source) || used_target.contains(c.target)) continue;
    used_source.insert(c.source);
    used_target.insert(c.target);
    chosen.push_back(c);
  }
  return chosen;
}

std::vector<ObjectHypothesis> assemble_objects(std::span<const PartInstance> parts,
                                               std::span<const std::optional<Vec2>> paf_dirs,
                                               const CameraIntrinsics& projector,
                                               double min_score) {
  // Each part class plays one role (dependent or anchor) in exactly one
  // compatible pair, so a single greedy pass handles every pair class.
  const auto matches = greedy_assignment(pair_candidates(parts, paf_dirs, projector, min_score));

  std::map<std::size_t, ObjectHypothesis> by_first;
  std::vector<bool> placed(parts.size(), false);
  for (const auto& m : matches) {
    ObjectHypothesis h;
    h.parts = {m.source, m.target};
    by_first.emplace(std::min(m.source, m.target), std::move(h));
    placed[m.source] = placed[m.target] = true;
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!placed[i]) by_first.emplace(i, ObjectHypothesis{{i}, std::nullopt});
  }

  std::vector<ObjectHypothesis> out;
  out.reserve(by_first.size());
  for (auto& [first, h] : by_first) {
    std::set<PartClass> classes;
    for (std::size_t p : h.parts) classes.insert(parts[p].part_class);
    h.object_class = object_for_parts(classes);
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace acf
