#pragma once

#include "acf/geometry.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace acf {

// Per-seed mask confidence M*_i in [0, 1].
struct MaskWeights {
  std::vector<double> weights;

  std::size_t size() const noexcept { return weights.size(); }
  double total() const noexcept;
  // Throws InvalidArgument when any weight leaves [0, 1] or is not finite.
  void validate() const;
};

// Per-seed 3D offset toward a voted point.
struct OffsetField {
  std::vector<Vec3> offsets;
  std::size_t size() const noexcept { return offsets.size(); }
};

// Per-seed offsets toward the two axis endpoints.
struct EndpointOffsetField {
  std::vector<std::array<Vec3, 2>> offsets;

  std::size_t size() const noexcept { return offsets.size(); }
  OffsetField channel(std::size_t m) const;
};

// Per-seed closer-endpoint logits; label 1 means closer to endpoint 2.
struct LabelPrediction {
  std::vector<double> logits;
  std::vector<int> labels_star;
};

}  // namespace acf
