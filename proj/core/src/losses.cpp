#include "acf/losses.hpp"

#include "acf/error.hpp"

#include <algorithm>
#include <cmath>

namespace acf {

namespace {

void require_size(std::size_t got, const MaskWeights& mask, const char* what) {
  if (got != mask.size()) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " length does not match the mask length");
  }
}

void require_unit(const Vec3& n) {
  if (std::abs(n.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "ground-truth axis must be unit length");
  }
}

double sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

void AxisGroundTruth::validate() const { require_unit(n_star); }

double f_vote(std::span<const double> per_seed_loss, const MaskWeights& mask) {
  require_size(per_seed_loss.size(), mask, "per-seed loss");
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < per_seed_loss.size(); ++i) {
    const double m = mask.weights[i];
    if (m == 0.0) continue;
    weighted += per_seed_loss[i] * m;
    total += m;
  }
  if (total <= 0.0) throw Error(ErrorCode::EmptyMask, "no seed inside the mask");
  return weighted / total;
}

std::vector<double> f_vote_weights(const MaskWeights& mask) {
  const double total = mask.total();
  if (total <= 0.0) throw Error(ErrorCode::EmptyMask, "no seed inside the mask");
  std::vector<double> w(mask.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = mask.weights[i] / total;
  return w;
}

double loss_keypoint(const OffsetField& pred, const OffsetField& truth, const MaskWeights& mask) {
  require_size(pred.size(), mask, "prediction");
  require_size(truth.size(), mask, "ground truth");
  std::vector<double> per_seed(pred.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    per_seed[i] = (pred.offsets[i] - truth.offsets[i]).lpNorm<1>();
  }
  return f_vote(per_seed, mask);
}

double loss_endpoint(const EndpointOffsetField& pred, const EndpointOffsetField& truth,
                     const MaskWeights& mask) {
  return loss_keypoint(pred.channel(0), truth.channel(0), mask) +
         loss_keypoint(pred.channel(1), truth.channel(1), mask);
}

double loss_axis(const EndpointOffsetField& pred, const AxisGroundTruth& truth,
                 const MaskWeights& mask) {
  truth.validate();
  require_size(pred.size(), mask, "prediction");
  require_size(truth.endpoint_offsets_star.size(), mask, "ground truth");
  std::vector<double> per_seed(pred.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    double s = 0.0;
    for (std::size_t m = 0; m < 2; ++m) {
      const Vec3 d = pred.offsets[i][m] - truth.endpoint_offsets_star.offsets[i][m];
      s += d.cross(truth.n_star).norm();
    }
    per_seed[i] = s;
  }
  return f_vote(per_seed, mask);
}

double loss_direction(const EndpointOffsetField& pred, const AxisGroundTruth& truth,
                      const MaskWeights& mask) {
  truth.validate();
  require_size(pred.size(), mask, "prediction");
  std::vector<double> per_seed(pred.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    per_seed[i] = 1.0 - (pred.offsets[i][1] - pred.offsets[i][0]).dot(truth.n_star);
  }
  return f_vote(per_seed, mask);
}

double loss_paf(const PafPrediction& pred, const MaskWeights& mask) {
  if (std::abs(pred.target_star.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "affinity target must be unit length");
  }
  require_size(pred.vectors.size(), mask, "prediction");
  std::vector<double> per_seed(pred.vectors.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    per_seed[i] = (pred.vectors[i] - pred.target_star).norm();
  }
  return f_vote(per_seed, mask);
}

double loss_vector(std::span<const Vec3> pred, const Vec3& n_star, const MaskWeights& mask) {
  require_unit(n_star);
  require_size(pred.size(), mask, "prediction");
  std::vector<double> per_seed(pred.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) per_seed[i] = (pred[i] - n_star).norm();
  return f_vote(per_seed, mask);
}

double loss_inner(const OffsetField& pred, const Vec3& n_star, const MaskWeights& mask,
                  InnerLossMode mode) {
  require_unit(n_star);
  require_size(pred.size(), mask, "prediction");
  std::vector<double> per_seed(pred.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    const double dot = pred.offsets[i].dot(n_star);
    switch (mode) {
      case InnerLossMode::Signed: per_seed[i] = dot; break;
      case InnerLossMode::Absolute: per_seed[i] = std::abs(dot); break;
      case InnerLossMode::Squared: per_seed[i] = dot * dot; break;
    }
  }
  return f_vote(per_seed, mask);
}

double bce_with_logits(double logit, int label) {
  return std::max(logit, 0.0) - logit * label + std::log1p(std::exp(-std::abs(logit)));
}

double loss_label(const LabelPrediction& pred, const MaskWeights& mask) {
  require_size(pred.logits.size(), mask, "logits");
  require_size(pred.labels_star.size(), mask, "labels");
  std::vector<double> per_seed(pred.logits.size());
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    const int y = pred.labels_star[i];
    if (y != 0 && y != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    per_seed[i] = bce_with_logits(pred.logits[i], y);
  }
  return f_vote(per_seed, mask);
}

OffsetField loss_keypoint_gradient(const OffsetField& pred, const OffsetField& truth,
                                   const MaskWeights& mask) {
  require_size(pred.size(), mask, "prediction");
  require_size(truth.size(), mask, "ground truth");
  const auto w = f_vote_weights(mask);
  OffsetField g;
  g.offsets.resize(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 d = pred.offsets[i] - truth.offsets[i];
    g.offsets[i] = w[i] * Vec3(sign(d.x()), sign(d.y()), sign(d.z()));
  }
  return g;
}

EndpointOffsetField loss_endpoint_gradient(const EndpointOffsetField& pred,
                                           const EndpointOffsetField& truth,
                                           const MaskWeights& mask) {
  const OffsetField g0 = loss_keypoint_gradient(pred.channel(0), truth.channel(0), mask);
  const OffsetField g1 = loss_keypoint_gradient(pred.channel(1), truth.channel(1), mask);
  EndpointOffsetField g;
  g.offsets.resize(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i) g.offsets[i] = {g0.offsets[i], g1.offsets[i]};
  return g;
}

EndpointOffsetField loss_axis_gradient(const EndpointOffsetField& pred,
                                       const AxisGroundTruth& truth, const MaskWeights& mask) {
  truth.validate();
  require_size(pred.size(), mask, "prediction");
  require_size(truth.endpoint_offsets_star.size(), mask, "ground truth");
  const auto w = f_vote_weights(mask);
  EndpointOffsetField g;
  g.offsets.resize(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t m = 0; m < 2; ++m) {
      const Vec3 c = (pred.offsets[i][m] - truth.endpoint_offsets_star.offsets[i][m])
                         .cross(truth.n_star);
      const double norm = c.norm();
      // d||d x n|| / dd = n x (d x n) / ||d x n||; zero subgradient at the kink.
      g.offsets[i][m] = norm > 0.0 ? Vec3(w[i] * truth.n_star.cross(c) / norm) : Vec3::Zero();
    }
  }
  return g;
}

EndpointOffsetField loss_direction_gradient(const EndpointOffsetField& pred,
                                            const AxisGroundTruth& truth,
                                            const MaskWeights& mask) {
  truth.validate();
  require_size(pred.size(), mask, "prediction");
  const auto w = f_vote_weights(mask);
  EndpointOffsetField g;
  g.offsets.resize(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.offsets[i] = {w[i] * truth.n_star, -w[i] * truth.n_star};
  }
  return g;
}

std::vector<Vec2> loss_paf_gradient(const PafPrediction& pred, const MaskWeights& mask) {
  require_size(pred.vectors.size(), mask, "prediction");
  const auto w = f_vote_weights(mask);
  std::vector<Vec2> g(pred.vectors.size(), Vec2::Zero());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 d = pred.vectors[i] - pred.target_star;
    const double norm = d.norm();
    if (norm > 0.0) g[i] = w[i] * d / norm;
  }
  return g;
}

std::vector<Vec3> loss_vector_gradient(std::span<const Vec3> pred, const Vec3& n_star,
                                       const MaskWeights& mask) {
  require_size(pred.size(), mask, "prediction");
  const auto w = f_vote_weights(mask);
  std::vector<Vec3> g(pred.size(), Vec3::Zero());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 d = pred[i] - n_star;
    const double norm = d.norm();
    if (norm > 0.0) g[i] = w[i] * d / norm;
  }
  return g;
}

OffsetField loss_inner_gradient(const OffsetField& pred, const Vec3& n_star,
                                const MaskWeights& mask, InnerLossMode mode) {
  require_size(pred.size(), mask, "prediction");
  const auto w = f_vote_weights(mask);
  OffsetField g;
  g.offsets.resize(pred.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double dot = pred.offsets[i].dot(n_star);
    double scale = 1.0;
    if (mode == InnerLossMode::Absolute) scale = sign(dot);
    if (mode == InnerLossMode::Squared) scale = 2.0 * dot;
    g.offsets[i] = w[i] * scale * n_star;
  }
  return g;
}

std::vector<double> loss_label_gradient(const LabelPrediction& pred, const MaskWeights& mask) {
  require_size(pred.logits.size(), mask, "logits");
  const auto w = f_vote_weights(mask);
  std::vector<double> g(pred.logits.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double sigmoid = 1.0 / (1.0 + std::exp(-pred.logits[i]));
    g[i] = w[i] * (sigmoid - pred.labels_star[i]);
  }
  return g;
}

std::vector<double> numeric_gradient(const ScalarFunction& f, std::span<const double> x,
                                     double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be > 0");
  std::vector<double> probe(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double gradient_relative_error(std::span<const double> analytic,
                               std::span<const double> numeric) {
  if (analytic.size() != numeric.size()) {
    throw Error(ErrorCode::InvalidArgument, "gradient sizes differ");
  }
  double diff = 0.0, na = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    na += analytic[i] * analytic[i];
    nn += numeric[i] * numeric[i];
  }
  const double scale = std::sqrt(std::max(na, nn));
  return scale == 0.0 ? 0.0 : std::sqrt(diff) / scale;
}

std::vector<double> flatten(const OffsetField& f) { return flatten(std::span<const Vec3>(f.offsets)); }

std::vector<double> flatten(const EndpointOffsetField& f) {
  std::vector<double> x;
  x.reserve(f.size() * 6);
  for (const auto& pair : f.offsets) {
    for (const Vec3& v : pair) x.insert(x.end(), {v.x(), v.y(), v.z()});
  }
  return x;
}

std::vector<double> flatten(std::span<const Vec2> v) {
  std::vector<double> x;
  x.reserve(v.size() * 2);
  for (const Vec2& p : v) x.insert(x.end(), {p.x(), p.y()});
  return x;
}

std::vector<double> flatten(std::span<const Vec3> v) {
  std::vector<double> x;
  x.reserve(v.size() * 3);
  for (const Vec3& p : v) x.insert(x.end(), {p.x(), p.y(), p.z()});
  return x;
}

OffsetField unflatten_offsets(std::span<const double> x) { return {unflatten_vec3(x)}; }

EndpointOffsetField unflatten_endpoint_offsets(std::span<const double> x) {
  EndpointOffsetField f;
  f.offsets.resize(x.size() / 6);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.offsets[i] = {Vec3(x[6 * i], x[6 * i + 1], x[6 * i + 2]),
                    Vec3(x[6 * i + 3], x[6 * i + 4], x[6 * i + 5])};
  }
  return f;
}

std::vector<Vec2> unflatten_vec2(std::span<const double> x) {
  std::vector<Vec2> v(x.size() / 2);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {x[2 * i], x[2 * i + 1]};
  return v;
}

std::vector<Vec3> unflatten_vec3(std::span<const double> x) {
  std::vector<Vec3> v(x.size() / 3);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = {x[3 * i], x[3 * i + 1], x[3 * i + 2]};
  return v;
}

}  // namespace acf
