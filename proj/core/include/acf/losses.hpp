#pragma once

// Training losses for the keypoint, axis and affinity heads, evaluated as
// plain scalar functions of the per-seed predictions. Each loss has a
// matching *_gradient function returning d(loss)/d(prediction) in the same
// shape as the prediction; finite differences check them in the tests.
//
// All losses reduce per-seed terms with f_vote in ascending seed order.

#include "acf/fields.hpp"
#include "acf/geometry.hpp"

#include <functional>
#include <span>
#include <vector>

namespace acf {

struct AxisGroundTruth {
  Vec3 n_star = Vec3::UnitZ();
  EndpointOffsetField endpoint_offsets_star;
  OffsetField keypoint_offsets_star;

  void validate() const;
};

struct PafPrediction {
  std::vector<Vec2> vectors;
  Vec2 target_star = Vec2::UnitX();
};

// Signed is the default; the absolute and squared variants are opt-in.
enum class InnerLossMode { Signed, Absolute, Squared };

/// Mask-weighted mean sum(loss_i * M_i) / sum(M_i).
/// Throws EmptyMask if the mask sums to zero.
double f_vote(std::span<const double> per_seed_loss, const MaskWeights& mask);

/// d f_vote / d loss_i = M_i / sum(M).
std::vector<double> f_vote_weights(const MaskWeights& mask);

double loss_keypoint(const OffsetField& pred, const OffsetField& truth, const MaskWeights& mask);
double loss_endpoint(const EndpointOffsetField& pred, const EndpointOffsetField& truth,
                     const MaskWeights& mask);
double loss_axis(const EndpointOffsetField& pred, const AxisGroundTruth& truth,
                 const MaskWeights& mask);
double loss_direction(const EndpointOffsetField& pred, const AxisGroundTruth& truth,
                      const MaskWeights& mask);
double loss_paf(const PafPrediction& pred, const MaskWeights& mask);
double loss_vector(std::span<const Vec3> pred, const Vec3& n_star, const MaskWeights& mask);
double loss_inner(const OffsetField& pred, const Vec3& n_star, const MaskWeights& mask,
                  InnerLossMode mode = InnerLossMode::Signed);
double loss_label(const LabelPrediction& pred, const MaskWeights& mask);

// Numerically stable max(l, 0) - l y + log(1 + exp(-|l|)).
double bce_with_logits(double logit, int label);

OffsetField loss_keypoint_gradient(const OffsetField& pred, const OffsetField& truth,
                                   const MaskWeights& mask);
EndpointOffsetField loss_endpoint_gradient(const EndpointOffsetField& pred,
                                           const EndpointOffsetField& truth,
                                           const MaskWeights& mask);
EndpointOffsetField loss_axis_gradient(const EndpointOffsetField& pred,
                                       const AxisGroundTruth& truth, const MaskWeights& mask);
EndpointOffsetField loss_direction_gradient(const EndpointOffsetField& pred,
                                            const AxisGroundTruth& truth,
                                            const MaskWeights& mask);
std::vector<Vec2> loss_paf_gradient(const PafPrediction& pred, const MaskWeights& mask);
std::vector<Vec3> loss_vector_gradient(std::span<const Vec3> pred, const Vec3& n_star,
                                       const MaskWeights& mask);
OffsetField loss_inner_gradient(const OffsetField& pred, const Vec3& n_star,
                                const MaskWeights& mask,
                                InnerLossMode mode = InnerLossMode::Signed);
std::vector<double> loss_label_gradient(const LabelPrediction& pred, const MaskWeights& mask);

using ScalarFunction = std::function<double(std::span<const double>)>;

/// Central finite differences (f(x + h e_i) - f(x - h e_i)) / 2h.
std::vector<double> numeric_gradient(const ScalarFunction& f, std::span<const double> x,
                                     double h);

/// ||a - b|| / max(||a||, ||b||); 0 when both are zero.
double gradient_relative_error(std::span<const double> analytic, std::span<const double> numeric);

// Flattening helpers shared by the gradient checks.
std::vector<double> flatten(const OffsetField& f);
std::vector<double> flatten(const EndpointOffsetField& f);
std::vector<double> flatten(std::span<const Vec2> v);
std::vector<double> flatten(std::span<const Vec3> v);
OffsetField unflatten_offsets(std::span<const double> x);
EndpointOffsetField unflatten_endpoint_offsets(std::span<const double> x);
std::vector<Vec2> unflatten_vec2(std::span<const double> x);
std::vector<Vec3> unflatten_vec3(std::span<const double> x);

}  // namespace acf
