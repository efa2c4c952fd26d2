#include "acf/error.hpp"
#include "acf/evaluation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace acf;
using acf::testing::Rng;

namespace {

// Independent all-point AP: every true positive contributes 1/G times the
// best precision reached at or after its rank.
double oracle_ap(const std::vector<bool>& tp, int num_gt) {
  std::vector<double> precision;
  int hits = 0;
  for (std::size_t k = 0; k < tp.size(); ++k) {
    hits += tp[k];
    precision.push_back(static_cast<double>(hits) / static_cast<double>(k + 1));
  }
  double ap = 0.0;
  for (std::size_t k = 0; k < tp.size(); ++k) {
    if (!tp[k]) continue;
    ap += *std::max_element(precision.begin() + k, precision.end()) / num_gt;
  }
  return 100.0 * ap;
}

ScoredPart pred(const std::string& scene, PartClass c, const Vec3& kp, const Vec3& axis, double score) {
  return {scene, c, Acf(kp, axis), score};
}

GroundTruthPart truth(const std::string& scene, PartClass c, const Vec3& kp, const Vec3& axis) {
  return {scene, c, Acf(kp, axis)};
}

Vec3 tilt(double deg) { return Eigen::AngleAxisd(deg * kRadPerDeg, Vec3::UnitX()) * Vec3::UnitZ(); }

}  // namespace

TEST(Errors, Angular) {
  EXPECT_EQ(angular_error(Vec3::UnitZ(), Vec3::UnitZ()), 0.0);
  EXPECT_NEAR(angular_error(Vec3::UnitZ(), -Vec3::UnitZ()), 180.0, 1e-12);
  EXPECT_NEAR(angular_error(Vec3::UnitX(), Vec3::UnitY()), 90.0, 1e-12);
  EXPECT_NEAR(angular_error(Vec3(2, 0, 0), Vec3(1, 1, 0)), 45.0, 1e-12);
  try {
    angular_error(Vec3::Zero(), Vec3::UnitX());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
}

TEST(Errors, TranslationAndPose) {
  EXPECT_NEAR(translation_error(Vec3(0, 3, 0), Vec3(4, 0, 0)), 5.0, 1e-15);
  const ErrorPair e = pose_error(Acf(Vec3(0.01, 0, 0), tilt(7.0)), Acf(Vec3::Zero(), Vec3::UnitZ()));
  EXPECT_NEAR(e.angular_deg, 7.0, 1e-9);
  EXPECT_NEAR(e.translational_m, 0.01, 1e-15);
}

TEST(AveragePrecision, HandExample) {
  std::vector<PrPoint> curve;
  EXPECT_NEAR(average_precision({true, false, true}, 2, &curve), 250.0 / 3.0, 1e-9);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_NEAR(curve[1].precision, 0.5, 1e-15);
  EXPECT_NEAR(curve[2].recall, 1.0, 1e-15);
  EXPECT_NEAR(oracle_ap({true, false, true}, 2), 250.0 / 3.0, 1e-9);
}

TEST(AveragePrecision, MatchesOracleOnRandomRankings) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = rng.integer(0, 30);
    std::vector<bool> tp;
    int hits = 0;
    for (int k = 0; k < n; ++k) {
      tp.push_back(rng.uniform() < 0.5);
      hits += tp.back();
    }
    const int gt = hits + rng.integer(0, 5);
    if (gt == 0) continue;
    EXPECT_NEAR(average_precision(tp, gt), oracle_ap(tp, gt), 1e-9);
  }
}

TEST(AveragePrecision, Edges) {
  EXPECT_EQ(average_precision({}, 3), 0.0);
  EXPECT_EQ(average_precision({true}, 0), 0.0);
  EXPECT_NEAR(average_precision({true, true}, 2), 100.0, 1e-12);
  EXPECT_NEAR(average_precision({false, true}, 1), 50.0, 1e-12);
}

TEST(MatchAndScore, PerfectPredictions) {
  std::vector<ScoredPart> p;
  std::vector<GroundTruthPart> g;
  for (int i = 0; i < 5; ++i) {
    const Vec3 kp(0.1 * i, 0, 1);
    g.push_back(truth("s", PartClass::Container, kp, Vec3::UnitZ()));
    p.push_back(pred("s", PartClass::Container, kp, Vec3::UnitZ(), 0.5 + 0.1 * i));
  }
  const EvalReport r = match_and_score(p, g, {});
  EXPECT_NEAR(r.mean_ap, 100.0, 1e-12);
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].true_positives, 5);
  EXPECT_EQ(r.ap(PartClass::Container), r.mean_ap);
  EXPECT_EQ(r.ap(PartClass::Handle), std::nullopt);
}

TEST(MatchAndScore, AngularGating) {
  const std::vector<GroundTruthPart> g{truth("s", PartClass::Handle, Vec3::Zero(), Vec3::UnitZ())};
  const std::vector<ScoredPart> p{pred("s", PartClass::Handle, Vec3::Zero(), tilt(12.0), 1.0)};
  EXPECT_EQ(match_and_score(p, g, {10.0, 0.02}).mean_ap, 0.0);
  EXPECT_NEAR(match_and_score(p, g, {15.0, 0.02}).mean_ap, 100.0, 1e-12);
}

TEST(MatchAndScore, TranslationGating) {
  const std::vector<GroundTruthPart> g{truth("s", PartClass::Scoop, Vec3::Zero(), Vec3::UnitZ())};
  const std::vector<ScoredPart> p{pred("s", PartClass::Scoop, Vec3(0.03, 0, 0), Vec3::UnitZ(), 1.0)};
  EXPECT_EQ(match_and_score(p, g, {10.0, 0.02}).mean_ap, 0.0);
  EXPECT_NEAR(match_and_score(p, g, {10.0, 0.05}).mean_ap, 100.0, 1e-12);
}

TEST(MatchAndScore, ThreePredictionHandExample) {
  const std::vector<GroundTruthPart> g{truth("s", PartClass::Stir, Vec3(0, 0, 1), Vec3::UnitZ()),
                                       truth("s", PartClass::Stir, Vec3(0.2, 0, 1), Vec3::UnitX())};
  const std::vector<ScoredPart> p{pred("s", PartClass::Stir, Vec3(0.2, 0, 1), Vec3::UnitX(), 0.7),
                                  pred("s", PartClass::Stir, Vec3(0, 0, 1), Vec3::UnitZ(), 0.9),
                                  pred("s", PartClass::Stir, Vec3(0.5, 0, 1), Vec3::UnitZ(), 0.8)};
  const EvalReport r = match_and_score(p, g, {});
  EXPECT_NEAR(r.mean_ap, oracle_ap({true, false, true}, 2), 1e-9);
  EXPECT_NEAR(r.mean_ap, 83.333333333, 1e-6);
  EXPECT_EQ(r.classes[0].num_predictions, 3);
  EXPECT_EQ(r.classes[0].true_positives, 2);
}

TEST(MatchAndScore, DuplicatesAndScenesAndClasses) {
  const std::vector<GroundTruthPart> g{truth("a", PartClass::Container, Vec3::Zero(), Vec3::UnitZ())};
  const std::vector<ScoredPart> p{pred("a", PartClass::Container, Vec3::Zero(), Vec3::UnitZ(), 0.9),
                                  pred("a", PartClass::Container, Vec3::Zero(), Vec3::UnitZ(), 0.8),
                                  pred("b", PartClass::Container, Vec3::Zero(), Vec3::UnitZ(), 0.95),
                                  pred("a", PartClass::Handle, Vec3::Zero(), Vec3::UnitZ(), 0.99)};
  const EvalReport r = match_and_score(p, g, {});
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].true_positives, 1);
  // Ranks: b (wrong scene), a, a duplicate.
  EXPECT_NEAR(r.mean_ap, oracle_ap({false, true, false}, 1), 1e-9);
}

TEST(MatchAndScore, LaterPredictionCanTakeAlternativeTruth) {
  // The first prediction fits both truths; the second fits only the first.
  const std::vector<GroundTruthPart> g{truth("s", PartClass::Container, Vec3(0, 0, 1), Vec3::UnitZ()),
                                       truth("s", PartClass::Container, Vec3(0.015, 0, 1), Vec3::UnitZ())};
  const std::vector<ScoredPart> p{pred("s", PartClass::Container, Vec3(0.008, 0, 1), Vec3::UnitZ(), 0.9),
                                  pred("s", PartClass::Container, Vec3(-0.01, 0, 1), Vec3::UnitZ(), 0.8)};
  EXPECT_NEAR(match_and_score(p, g, {10.0, 0.02}).mean_ap, 100.0, 1e-12);
}

TEST(MatchAndScore, ZeroPredictions) {
  const std::vector<GroundTruthPart> g{truth("s", PartClass::Handle, Vec3::Zero(), Vec3::UnitZ())};
  const EvalReport r = match_and_score({}, g, {});
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].ap, 0.0);
  EXPECT_EQ(r.mean_ap, 0.0);
  EXPECT_TRUE(match_and_score({}, {}, {}).classes.empty());
}

TEST(MatchAndScore, ThresholdValidation) {
  EXPECT_THROW(match_and_score({}, {}, {0.0, 0.02}), Error);
  EXPECT_THROW(match_and_score({}, {}, {10.0, -1.0}), Error);
}

namespace {

struct NoisySet {
  std::vector<ScoredPart> p;
  std::vector<GroundTruthPart> g;
};

NoisySet noisy_set(Rng& rng, double scale = 1.0) {
  NoisySet s;
  for (int scene = 0; scene < 5; ++scene) {
    const std::string id = "scene_" + std::to_string(scene);
    for (PartClass c : kAllPartClasses) {
      for (int i = 0; i < 3; ++i) {
        const Vec3 kp = rng.vec3(-0.3, 0.3);
        const Vec3 axis = rng.unit3();
        s.g.push_back(truth(id, c, scale * kp, axis));
        const Vec3 bent = Eigen::AngleAxisd(rng.uniform(0, 0.4), axis.unitOrthogonal()) * axis;
        s.p.push_back(pred(id, c, scale * (kp + rng.gauss3(0.01)), bent, rng.uniform()));
      }
    }
  }
  return s;
}

}  // namespace

TEST(MapCurve, MonotoneInBothThresholds) {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const NoisySet s = noisy_set(rng);
    const std::vector<double> angles{2.5, 5, 7.5, 10, 12.5, 15, 20, 25, 30};
    const auto curve = map_curve(s.p, s.g, angles, 0.02);
    ASSERT_EQ(curve.size(), angles.size() * 5);
    for (std::size_t row = 5; row < curve.size(); ++row) {
      EXPECT_EQ(curve[row].part_class, curve[row - 5].part_class);
      EXPECT_GE(curve[row].ap, curve[row - 5].ap - 1e-12);
    }
    const std::vector<double> translations{0.01, 0.02, 0.05};
    const auto tcurve = map_curve_translation(s.p, s.g, 10.0, translations);
    for (std::size_t row = 5; row < tcurve.size(); ++row) EXPECT_GE(tcurve[row].ap, tcurve[row - 5].ap - 1e-12);
  }
}

TEST(MatchAndScore, InvariantToUnitsAndRigidMotion) {
  Rng a(3), b(3);
  const NoisySet metres = noisy_set(a);
  const NoisySet mm = noisy_set(b, 1000.0);
  const EvalReport r1 = match_and_score(metres.p, metres.g, {10.0, 0.02});
  const EvalReport r2 = match_and_score(mm.p, mm.g, {10.0, 20.0});
  EXPECT_NEAR(r1.mean_ap, r2.mean_ap, 1e-9);

  Rng rng(4);
  const RigidTransform t{rng.rotation(), rng.vec3()};
  NoisySet moved = metres;
  for (auto& p : moved.p) p.acf = p.acf.transformed(t);
  for (auto& g : moved.g) g.acf = g.acf.transformed(t);
  EXPECT_NEAR(match_and_score(moved.p, moved.g, {10.0, 0.02}).mean_ap, r1.mean_ap, 1e-9);
}

TEST(CurveCsv, Format) {
  const std::vector<CurveSample> rows{{10.0, 2.0, PartClass::Container, 87.5}, {10.0, 2.0, std::nullopt, 50.0}};
  std::istringstream in(curve_csv(rows));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "threshold_deg,threshold_cm,part_class,AP");
  std::getline(in, line);
  EXPECT_EQ(line, "10,2,container,87.5");
  std::getline(in, line);
  EXPECT_EQ(line, "10,2,mean,50");
  EXPECT_FALSE(std::getline(in, line));
}
