#pragma once

#include <span>
#include <vector>

#include "vocra/geometry.h"

namespace vocra {

struct GncOptions {
  double initial_mu = 100.0;
  double decay = 1.2;
  // Stop once no weight moves by this much in one update.
  double weight_tolerance = 1e-6;
  // Optional starting weights (one per candidate); all ones when empty.
  std::vector<double> initial_weights;
};

// Per-iteration record. Objectives use the mu of that iteration and are
// expressed in units of mu xi^2 (see tb_objective).
struct GncIterationStats {
  double mu = 0.0;
  // At (previous rotation, previous weights); NaN on the first iteration.
  double objective_before = 0.0;
  // At (new rotation, previous weights).
  double objective_after_rotation = 0.0;
  // At (new rotation, new weights).
  double objective_after_weights = 0.0;
  double max_weight_change = 0.0;
};

struct GncTrace {
  std::size_t iterations = 0;
  // mu after the final decay step.
  double final_mu = 0.0;
  std::vector<double> final_weights;
  RotationMatrix rotation;
  // Weighted centroids from the final weights.
  Vec3 p_centroid = Vec3::Zero();
  Vec3 q_centroid = Vec3::Zero();
  bool converged = false;
  std::vector<GncIterationStats> history;
};

/// Graduated non-convexity refinement with the Tukey's Biweight kernel.
///
/// Alternates a weighted SVD rotation solve on the candidate pairs
/// (translation removed through weighted centroids) with the closed-form
/// weight update (1 - r^2/(mu xi^2))^2, dividing mu by `decay` after every
/// update. Stops when weights stagnate or mu drops below 1.
///
/// Throws Error(kInvalidArgument) on bad indices or xi, and
/// Error(kDegenerateCandidate) when the weighted problem loses rank or fewer
/// than 3 weights stay positive.
GncTrace solve_gnc_tb(const CorrespondenceSet& correspondences,
                      std::span<const Index> candidate, double xi,
                      const GncOptions& options = {});

}  // namespace vocra
