#pragma once

#include "acf/camera.hpp"
#include "acf/fields.hpp"
#include "acf/taxonomy.hpp"

#include <optional>
#include <set>
#include <span>
#include <vector>

namespace acf {

inline constexpr double kDefaultMinPairScore = 0.5;

struct PafField {
  std::vector<Vec2> vectors;
  MaskWeights mask;
};

struct AssociationCandidate {
  std::size_t source = 0;
  std::size_t target = 0;
  double score = 0.0;  // cosine similarity in [-1, 1]
};

struct ObjectHypothesis {
  std::set<std::size_t> parts;
  std::optional<ObjectClass> object_class;
};

/// normalize(mask-weighted mean of the admitted affinity vectors).
/// Throws EmptyMask or DegenerateDirection.
Vec2 mean_paf_direction(const PafField& field, double threshold = 0.5);

/// Cosine between `source_paf_dir` and the image direction from the
/// projected source keypoint to the projected target keypoint.
double score_pair(const PartInstance& source, const PartInstance& target,
                  const Vec2& source_paf_dir, const CameraIntrinsics& projector);

/// All compatible (dependent -> anchor) candidates scoring >= min_score.
/// Parts without an affinity direction cannot act as a source.
std::vector<AssociationCandidate> pair_candidates(std::span<const PartInstance> parts,
                                                  std::span<const std::optional<Vec2>> paf_dirs,
                                                  const CameraIntrinsics& projector,
                                                  double min_score = kDefaultMinPairScore);

/// Highest score first, skipping already-matched instances.
std::vector<AssociationCandidate> greedy_assignment(std::vector<AssociationCandidate> candidates);

/// Groups parts into objects. Every part appears in exactly one hypothesis;
/// hypotheses are ordered by their smallest part index.
std::vector<ObjectHypothesis> assemble_objects(std::span<const PartInstance> parts,
                                               std::span<const std::optional<Vec2>> paf_dirs,
                                               const CameraIntrinsics& projector,
                                               double min_score = kDefaultMinPairScore);

}  // namespace acf
