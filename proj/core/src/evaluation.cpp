#include "acf/evaluation.hpp"

#include "acf/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace acf {

void ThresholdSpec::validate() const {
  if (!(max_angle_deg > 0.0) || !(max_translation_m > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "thresholds must be positive");
  }
}

std::optional<double> EvalReport::ap(PartClass c) const {
  for (const auto& r : classes) {
    if (r.part_class == c) return r.ap;
  }
  return std::nullopt;
}

double angular_error(const Vec3& n1, const Vec3& n2) {
  const double a = n1.norm();
  const double b = n2.norm();
  if (a < 1e-9 || b < 1e-9) throw Error(ErrorCode::ZeroVector, "axis has zero length");
  const double dot = std::clamp(n1.dot(n2) / (a * b), -1.0, 1.0);
  return kDegPerRad * std::acos(dot);
}

double translation_error(const Vec3& k1, const Vec3& k2) { return (k1 - k2).norm(); }

ErrorPair pose_error(const Acf& predicted, const Acf& truth) {
  return {angular_error(predicted.axis(), truth.axis()),
          translation_error(predicted.keypoint(), truth.keypoint())};
}

double average_precision(const std::vector<bool>& tp_in_rank_order, int num_ground_truth,
                         std::vector<PrPoint>* curve) {
  if (curve) curve->clear();
  if (num_ground_truth <= 0) return 0.0;
  const std::size_t n = tp_in_rank_order.size();
  std::vector<double> recall(n), precision(n);
  int tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp += tp_in_rank_order[k] ? 1 : 0;
    recall[k] = static_cast<double>(tp) / num_ground_truth;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    if (curve) curve->push_back({recall[k], precision[k]});
  }
  // Precision envelope: best precision at any recall >= r.
  std::vector<double> envelope(precision);
  for (std::size_t k = n; k-- > 1;) envelope[k - 1] = std::max(envelope[k - 1], envelope[k]);
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    ap += (recall[k] - prev_recall) * envelope[k];
    prev_recall = recall[k];
  }
  return 100.0 * ap;
}

EvalReport match_and_score(std::span<const ScoredPart> predictions,
                           std::span<const GroundTruthPart> ground_truth,
                           const ThresholdSpec& spec) {
  spec.validate();
  EvalReport report;
  report.spec = spec;

  for (PartClass cls : kAllPartClasses) {
    std::vector<std::size_t> preds, gts;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
      if (predictions[i].part_class == cls) preds.push_back(i);
    }
    for (std::size_t i = 0; i < ground_truth.size(); ++i) {
      if (ground_truth[i].part_class == cls) gts.push_back(i);
    }
    if (gts.empty()) continue;

    std::stable_sort(preds.begin(), preds.end(), [&](std::size_t a, std::size_t b) {
      return predictions[a].score > predictions[b].score;
    });

    // Admissible ground truth per prediction, best translation first.
    std::map<std::size_t, std::vector<std::size_t>> edges;
    for (std::size_t p : preds) {
      std::vector<std::pair<double, std::size_t>> ok;
      for (std::size_t g : gts) {
        if (ground_truth[g].scene_id != predictions[p].scene_id) continue;
        const ErrorPair e = pose_error(predictions[p].acf, ground_truth[g].acf);
        if (e.angular_deg <= spec.max_angle_deg && e.translational_m <= spec.max_translation_m) {
          ok.emplace_back(e.translational_m, g);
        }
      }
      std::stable_sort(ok.begin(), ok.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      auto& list = edges[p];
      for (const auto& [err, g] : ok) list.push_back(g);
    }

    // Incremental maximum matching in confidence order: a prediction is a
    // true positive iff an augmenting path admits it.
    std::map<std::size_t, std::size_t> owner;  // ground truth -> prediction
    std::function<bool(std::size_t, std::set<std::size_t>&)> augment =
        [&](std::size_t p, std::set<std::size_t>& seen) {
          for (std::size_t g : edges[p]) {
            if (!seen.insert(g).second) continue;
            auto it = owner.find(g);
            if (it == owner.end() || augment(it->second, seen)) {
              owner[g] = p;
              return true;
            }
          }
          return false;
        };

    std::vector<bool> tp;
    tp.reserve(preds.size());
    for (std::size_t p : preds) {
      std::set<std::size_t> seen;
      tp.push_back(augment(p, seen));
    }

    ClassReport cr;
    cr.part_class = cls;
    cr.num_ground_truth = static_cast<int>(gts.size());
    cr.num_predictions = static_cast<int>(preds.size());
    cr.true_positives = static_cast<int>(std::count(tp.begin(), tp.end(), true));
    cr.ap = average_precision(tp, cr.num_ground_truth, &cr.curve);
    report.classes.push_back(std::move(cr));
  }

  if (!report.classes.empty()) {
    double sum = 0.0;
    for (const auto& c : report.classes) sum += c.ap;
    report.mean_ap = sum / static_cast<double>(report.classes.size());
  }
  return report;
}

namespace {

void append_samples(std::vector<CurveSample>& out, const EvalReport& r) {
  const double deg = r.spec.max_angle_deg;
  const double cm = r.spec.max_translation_m * 100.0;
  for (const auto& c : r.classes) out.push_back({deg, cm, c.part_class, c.ap});
  out.push_back({deg, cm, std::nullopt, r.mean_ap});
}

}  // namespace

std::vector<CurveSample> map_curve(std::span<const ScoredPart> predictions,
                                   std::span<const GroundTruthPart> ground_truth,
                                   std::span<const double> angles_deg, double translation_fixed_m) {
  std::vector<CurveSample> out;
  for (double a : angles_deg) {
    append_samples(out, match_and_score(predictions, ground_truth, {a, translation_fixed_m}));
  }
  return out;
}

std::vector<CurveSample> map_curve_translation(std::span<const ScoredPart> predictions,
                                               std::span<const GroundTruthPart> ground_truth,
                                               double angle_fixed_deg,
                                               std::span<const double> translations_m) {
  std::vector<CurveSample> out;
  for (double t : translations_m) {
    append_samples(out, match_and_score(predictions, ground_truth, {angle_fixed_deg, t}));
  }
  return out;
}

std::string curve_csv(std::span<const CurveSample> samples) {
  std::ostringstream os;
  os.precision(10);
  os << "threshold_deg,threshold_cm,part_class,AP\n";
  for (const auto& s : samples) {
    os << s.threshold_deg << ',' << s.threshold_cm << ','
       << (s.part_class ? to_string(*s.part_class) : std::string_view("mean")) << ',' << s.ap
       << '\n';
  }
  return os.str();
}

}  // namespace acf
