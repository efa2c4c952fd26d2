#pragma once

// Run configuration shared by all subcommands. Every section is optional;
// unknown keys are rejected with SchemaViolation.

#include "acf/evaluation.hpp"
#include "acf/losses.hpp"
#include "acf/pipeline.hpp"
#include "acf/synthetic.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace acf::cli {

struct EvaluationConfig {
  ThresholdSpec thresholds;
  std::vector<double> curve_angles_deg{2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 20.0, 25.0, 30.0};
  std::vector<double> curve_translations_cm{1.0, 2.0, 5.0};
};

struct LossCheckConfig {
  double h = 1e-5;
  // Gradients are compared at the prediction moved by at least probe_sigma
  // per coordinate, away from the kinks of the L1 and norm losses at truth.
  double probe_sigma = 5e-3;
  std::uint64_t probe_seed = 0;
  InnerLossMode inner_mode = InnerLossMode::Signed;
};

struct RunConfig {
  int n_scenes = 10;
  std::uint64_t seed = 0;
  RandomSceneOptions scene;
  NoiseModel noise;
  EmulationConfig emulation;
  EstimatorConfig estimator;
  double min_pair_score = kDefaultMinPairScore;
  ManipulationConfig manipulation;
  EvaluationConfig evaluation;
  LossCheckConfig losscheck;

  void validate() const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

}  // namespace acf::cli
