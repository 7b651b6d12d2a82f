#pragma once

#include <cmath>
#include <vector>

#include "vocra/geometry.h"
#include "vocra/robust_cost.h"

namespace vocra {

// Outcome of pairwise voting.
struct VoteTable {
  // Accumulated vote per correspondence (partial when early_exit is set).
  std::vector<double> votes;
  // Correspondence indices sorted by descending vote, ties by index.
  std::vector<Index> order;
  // Set when a correspondence among the first 20 collected >= 0.2 N votes,
  // which ends voting early ("enough inliers").
  bool early_exit = false;
  // Number of outer rows fully processed.
  std::size_t rows_processed = 0;
};

// | |q_i - q_j| - |p_i - p_j| |. Zero for noiseless inliers of a common rigid
// motion and at most 2 xi when both noise vectors are bounded by xi.
inline double pairwise_scale_gap(const Vec3& pi, const Vec3& qi,
                                 const Vec3& pj, const Vec3& qj) {
  return std::abs((qi - qj).norm() - (pi - pj).norm());
}

inline constexpr std::size_t kEarlyExitRows = 20;
inline constexpr double kEarlyExitVoteFraction = 0.2;

/// Scores every correspondence by the kernel-weighted number of partners
/// satisfying the pairwise scale-invariant condition, then orders them.
///
/// The kernel's own xi is ignored in favour of `xi`; the kernel supplies the
/// shape and mu. Each unordered pair contributes vote_increment(S_ij) to both
/// members. After the row of outer index i (one of the first 20 rows) is
/// complete, v_i >= 0.2 N stops voting with early_exit set.
///
/// Throws Error(kInsufficientCorrespondences) when N < 2.
VoteTable voting_tb(const CorrespondenceSet& correspondences, double xi,
                    const VoteKernel& kernel);

}  // namespace vocra
