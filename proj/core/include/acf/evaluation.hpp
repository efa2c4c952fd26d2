#pragma once

#include "acf/taxonomy.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace acf {

struct ErrorPair {
  double angular_deg = 0.0;
  double translational_m = 0.0;
};

// Combined tolerance such as 10 deg | 2 cm.
struct ThresholdSpec {
  double max_angle_deg = 10.0;
  double max_translation_m = 0.02;

  void validate() const;
};

struct ScoredPart {
  std::string scene_id;
  PartClass part_class = PartClass::Container;
  Acf acf{Vec3::Zero(), Vec3::UnitZ()};
  double score = 1.0;
};

struct GroundTruthPart {
  std::string scene_id;
  PartClass part_class = PartClass::Container;
  Acf acf{Vec3::Zero(), Vec3::UnitZ()};
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct ClassReport {
  PartClass part_class = PartClass::Container;
  int num_ground_truth = 0;
  int num_predictions = 0;
  int true_positives = 0;
  double ap = 0.0;  // [0, 100]
  std::vector<PrPoint> curve;
};

struct EvalReport {
  ThresholdSpec spec;
  std::string interpolation = "all-point";
  std::vector<ClassReport> classes;  // only classes with ground truth
  double mean_ap = 0.0;

  std::optional<double> ap(PartClass c) const;
};

/// 180/pi * acos(n1 . n2) after renormalizing; throws ZeroVector.
double angular_error(const Vec3& n1, const Vec3& n2);
double translation_error(const Vec3& k1, const Vec3& k2);
ErrorPair pose_error(const Acf& predicted, const Acf& truth);

/// All-point interpolated AP in [0, 100] from true-positive flags listed in
/// descending confidence order.
double average_precision(const std::vector<bool>& tp_in_rank_order, int num_ground_truth,
                         std::vector<PrPoint>* curve = nullptr);

/// Predictions are taken in descending confidence and matched one-to-one to
/// same-scene, same-class ground truth within both tolerances. A prediction
/// counts as a true positive when the maximum matching grows by admitting it.
EvalReport match_and_score(std::span<const ScoredPart> predictions,
                           std::span<const GroundTruthPart> ground_truth,
                           const ThresholdSpec& spec);

struct CurveSample {
  double threshold_deg = 0.0;
  double threshold_cm = 0.0;
  std::optional<PartClass> part_class;  // empty for the mean row
  double ap = 0.0;
};

/// Sweeps the angular threshold at a fixed translation tolerance.
std::vector<CurveSample> map_curve(std::span<const ScoredPart> predictions,
                                   std::span<const GroundTruthPart> ground_truth,
                                   std::span<const double> angles_deg, double translation_fixed_m);

/// Sweeps the translation threshold at a fixed angular tolerance.
std::vector<CurveSample> map_curve_translation(std::span<const ScoredPart> predictions,
                                               std::span<const GroundTruthPart> ground_truth,
                                               double angle_fixed_deg,
                                               std::span<const double> translations_m);

/// CSV with header threshold_deg,threshold_cm,part_class,AP.
std::string curve_csv(std::span<const CurveSample> samples);

}  // namespace acf
