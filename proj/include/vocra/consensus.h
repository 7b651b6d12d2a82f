#pragma once

#include <functional>
#include <span>
#include <vector>

#include "vocra/geometry.h"
#include "vocra/rotation_averaging.h"

namespace vocra {

struct ConsensusConfig {
  // Noise bound; pairs pass the scale-invariant test when S <= 2 xi.
  double xi = 0.05;
  // Chordal consensus threshold around the averaged rotation.
  double theta = 0.15;
  // Minimum inlier number I (>= 3).
  std::size_t min_inliers = 5;
  // Voting ended early: search all N correspondences, break at ceil(1.5 I).
  bool e_in = false;
  ChordalAveragingOptions averaging;

  void validate() const;
};

struct ConsensusResult {
  // I*: the best rotation consensus plus its anchor pair.
  std::vector<Index> inlier_candidates;
  RotationMatrix averaged_rotation;
  // K_max = |I*| - 2.
  std::size_t consensus_size = 0;
  bool early_break = false;
  Index anchor_i = 0;
  Index anchor_j = 0;

  // Search window N° and the break size numBreak actually used.
  std::size_t search_size = 0;
  std::size_t break_size = 0;
  std::size_t triples_solved = 0;
  std::size_t averaging_calls = 0;
};

// Instrumentation for tests; both callbacks are optional.
struct ConsensusHooks {
  // Called for every triple that passed the scale test and was solved.
  std::function<void(Index i, Index j, Index k)> on_triple;
  // Called with K_max whenever the running best is replaced.
  std::function<void(std::size_t k_max)> on_best_update;
};

// Minimum inlier number I for N correspondences: max(0.05N, 5) below 200,
// then 0.04N, 0.03N, 0.02N, 0.01N at 200, 300, 500, 1000. Rounded to the
// nearest integer, never below 3.
std::size_t min_inlier_schedule(std::size_t n);

/// Rotation-averaging consensus maximization over scale-filtered triples.
///
/// Walks position triples a < b < c of `order` within the first N°
/// entries (N° = ceil(0.2 N) normally, N when e_in). For each anchor pair
/// passing the scale test, every third correspondence passing it with both
/// anchors contributes a minimal triad rotation. Once at least I - 3 have
/// been collected, each new one triggers a robust chordal average and a
/// chordal consensus; the largest consensus (ties go to the later one) plus
/// the anchors becomes I*. Reaching numBreak ends the search.
///
/// Throws Error(kInsufficientCorrespondences) when N < 3,
/// Error(kInvalidArgument) when `order` is not a permutation and
/// Error(kNoConsensus) when no anchor pair ever collects I - 3 triples.
ConsensusResult max_rot_consensus(const CorrespondenceSet& correspondences,
                                  std::span<const Index> order,
                                  const ConsensusConfig& config,
                                  const ConsensusHooks* hooks = nullptr);

}  // namespace vocra
