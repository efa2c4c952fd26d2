#pragma once

// Brute-force references used to check the fast paths.

#include "acf/association.hpp"
#include "acf/geometry.hpp"

#include <span>
#include <vector>

namespace acf {

/// Argmax of the Gaussian KDE over a regular grid spanning the voter
/// bounding box padded by two bandwidths. Returns the best cell center;
/// ties keep the first cell in x-major scan order.
Vec3 brute_force_kde_argmax(std::span<const Vec3> voters, double bandwidth, double grid_pitch);

/// Exhaustive one-to-one assignment maximizing total score. At most 8
/// distinct sources and 8 distinct targets.
std::vector<AssociationCandidate> brute_force_assignment(
    std::span<const AssociationCandidate> candidates);

double total_score(std::span<const AssociationCandidate> matching);

}  // namespace acf
