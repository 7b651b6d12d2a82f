#pragma once

#include <vector>

#include "vocra/consensus.h"
#include "vocra/geometry.h"
#include "vocra/gnc_tb.h"
#include "vocra/voting.h"

namespace vocra {

struct VocraConfig {
  double sigma = 0.01;
  // Voting threshold (3 sigma by default).
  double xi1 = 0.03;
  // Consensus / refinement / inlier threshold (5 sigma by default).
  double xi2 = 0.05;
  // Chordal consensus threshold.
  double theta = 0.15;
  double vote_mu = 1.5;
  double gnc_mu0 = 100.0;
  double gnc_decay = 1.2;
  // 0 selects min_inlier_schedule(N).
  std::size_t min_inliers = 0;
  // Rounds of refit / re-threshold when recovering the final inlier set.
  int max_refit_rounds = 10;
  ChordalAveragingOptions averaging;

  static VocraConfig from_sigma(double sigma, double xi1_mult = 3.0,
                                double xi2_mult = 5.0, double theta = 0.15);
  // Throws Error(kInvalidArgument) unless all values are positive and
  // xi1 < xi2.
  void validate() const;
};

// Stage-level summaries kept for reporting.
struct Diagnostics {
  // Voting.
  bool e_in = false;
  std::size_t vote_rows = 0;
  double max_vote = 0.0;
  double min_vote = 0.0;
  // Consensus.
  std::size_t candidate_size = 0;
  std::size_t consensus_size = 0;
  bool consensus_early_break = false;
  std::size_t triples_solved = 0;
  std::size_t averaging_calls = 0;
  // GNC.
  std::size_t gnc_iterations = 0;
  double gnc_final_mu = 0.0;
  bool gnc_converged = false;
  // Final refit rounds (VOCRA) or hypotheses drawn (RANSAC).
  std::size_t refit_rounds = 0;
  std::size_t ransac_iterations = 0;
  // Stage wall-clock times.
  double vote_seconds = 0.0;
  double consensus_seconds = 0.0;
  double gnc_seconds = 0.0;
};

struct RegistrationResult {
  RigidTransform transform;
  // Sorted indices i with |R p_i + t - q_i| <= xi2 under `transform`.
  std::vector<Index> inliers;
  Diagnostics diagnostics;
  double runtime_seconds = 0.0;
};

/// Full pipeline: TB voting, rotation-averaging consensus, GNC-TB refinement,
/// then recovery of the complete inlier set.
///
/// The GNC rotation and its weighted centroids give a translation; every
/// correspondence within xi2 under that transform is an inlier. (R*, t*) is
/// refit by unweighted SVD on the inliers and the set re-thresholded until
/// it is stable, so the returned inliers always satisfy the xi2 bound under
/// the returned transform.
///
/// Throws Error(kInsufficientCorrespondences) for N < 3 and propagates
/// kNoConsensus, kDegenerateCandidate and kEmptyInlierSet.
RegistrationResult vocra(const CorrespondenceSet& correspondences,
                         const VocraConfig& config);

// Hypothesize-and-verify baseline with 3-point triad hypotheses, threshold xi
// and a 0.99-confidence adaptive stop. Throws Error(kNoConsensus) when no
// hypothesis gathers 3 inliers.
RegistrationResult ransac_baseline(const CorrespondenceSet& correspondences,
                                   double xi, std::size_t max_iters, Rng& rng);

// Geodesic angle between rotations, in degrees.
double rotation_error(const RotationMatrix& gt, const RotationMatrix& est);

double translation_error(const Vec3& gt, const Vec3& est);

}  // namespace vocra
