#include "acf/oracles.hpp"

#include "acf/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <map>

namespace acf {

Vec3 brute_force_kde_argmax(std::span<const Vec3> voters, double bandwidth, double grid_pitch) {
  if (voters.empty()) throw Error(ErrorCode::InvalidArgument, "no voters");
  if (!(bandwidth > 0.0) || !(grid_pitch > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "bandwidth and grid pitch must be positive");
  }
  Vec3 lo = voters.front(), hi = voters.front();
  for (const Vec3& v : voters) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  lo.array() -= 2.0 * bandwidth;
  hi.array() += 2.0 * bandwidth;

  const Eigen::Index n = static_cast<Eigen::Index>(voters.size());
  std::array<Eigen::MatrixXd, 3> axis_kernel;  // voter x cell, per dimension
  std::array<Eigen::Index, 3> cells{};
  const double inv = 1.0 / (2.0 * bandwidth * bandwidth);
  for (int d = 0; d < 3; ++d) {
    cells[d] = static_cast<Eigen::Index>(std::ceil((hi[d] - lo[d]) / grid_pitch));
    axis_kernel[d].resize(n, cells[d]);
    for (Eigen::Index c = 0; c < cells[d]; ++c) {
      const double x = lo[d] + (c + 0.5) * grid_pitch;
      for (Eigen::Index p = 0; p < n; ++p) {
        const double dx = x - voters[p][d];
        axis_kernel[d](p, c) = std::exp(-dx * dx * inv);
      }
    }
  }

  // The Gaussian kernel factorizes per axis, so each x-slab of the full
  // grid is one matrix product over voters.
  double best = -1.0;
  Vec3 best_cell = Vec3::Zero();
  Eigen::MatrixXd weighted(n, cells[1]);
  for (Eigen::Index i = 0; i < cells[0]; ++i) {
    weighted = axis_kernel[1].array().colwise() * axis_kernel[0].col(i).array();
    const Eigen::MatrixXd slab = weighted.transpose() * axis_kernel[2];
    for (Eigen::Index j = 0; j < cells[1]; ++j) {
      for (Eigen::Index k = 0; k < cells[2]; ++k) {
        if (slab(j, k) > best) {
          best = slab(j, k);
          best_cell = lo + grid_pitch * Vec3(i + 0.5, j + 0.5, k + 0.5);
        }
      }
    }
  }
  return best_cell;
}

double total_score(std::span<const AssociationCandidate> matching) {
  double s = 0.0;
  for (const auto& c : matching) s += c.score;
  return s;
}

std::vector<AssociationCandidate> brute_force_assignment(
    std::span<const AssociationCandidate> candidates) {
  std::map<std::size_t, std::vector<AssociationCandidate>> by_source;
  std::set<std::size_t> targets;
  for (const auto& c : candidates) {
    by_source[c.source].push_back(c);
    targets.insert(c.target);
  }
  if (by_source.size() > 8 || targets.size() > 8) {
    throw Error(ErrorCode::InvalidArgument, "brute-force assignment limited to 8 per side");
  }
  std::vector<std::vector<AssociationCandidate>> rows;
  for (auto& [s, list] : by_source) rows.push_back(list);

  std::vector<AssociationCandidate> current, best;
  double best_total = 0.0;
  std::set<std::size_t> used;
  std::function<void(std::size_t, double)> search = [&](std::size_t row, double total) {
    if (row == rows.size()) {
      if (total > best_total) {
        best_total = total;
        best = current;
      }
      return;
    }
    search(row + 1, total);
    for (const auto& c : rows[row]) {
      if (used.contains(c.target)) continue;
      used.insert(c.target);
      current.push_back(c);
      search(row + 1, total + c.score);
      current.pop_back();
      used.erase(c.target);
    }
  };
  search(0, 0.0);
  return best;
}

}  // namespace acf
