#include "vocra/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>

namespace vocra {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<Index> threshold_inliers(const CorrespondenceSet& pairs,
                                     const RigidTransform& tf, double xi) {
  std::vector<Index> inliers;
  for (Index i = 0; i < pairs.size(); ++i) {
    if ((tf.apply(pairs.p(i)) - pairs.q(i)).norm() <= xi) inliers.push_back(i);
  }
  return inliers;
}

// Unweighted SVD fit on a subset.
RigidTransform fit_subset(const CorrespondenceSet& pairs,
                          const std::vector<Index>& subset) {
  const CorrespondenceSet sub = pairs.subset(subset);
  const std::vector<double> ones(sub.size(), 1.0);
  RotationMatrix r;
  try {
    r = weighted_svd_rotation(sub, ones);
  } catch (const Error& e) {
    throw Error(ErrorCode::kDegenerateCandidate, e.what());
  }
  const Vec3 p_bar = weighted_centroid(sub.points_p(), ones);
  const Vec3 q_bar = weighted_centroid(sub.points_q(), ones);
  return {r, q_bar - r * p_bar};
}

// Refit on the inliers and re-threshold until the set stops changing. If it
// never settles, the last transform is kept and its own inlier set returned.
void refine_inliers(const CorrespondenceSet& pairs, double xi, int max_rounds,
                    RegistrationResult* result) {
  std::vector<Index> inliers = threshold_inliers(pairs, result->transform, xi);
  for (int round = 0; round < max_rounds; ++round) {
    if (inliers.size() < 3) break;
    result->transform = fit_subset(pairs, inliers);
    ++result->diagnostics.refit_rounds;
    std::vector<Index> next = threshold_inliers(pairs, result->transform, xi);
    const bool stable = next == inliers;
    inliers = std::move(next);
    if (stable) break;
  }
  if (inliers.size() < 3) {
    throw Error(ErrorCode::kEmptyInlierSet,
                "only " + std::to_string(inliers.size()) +
                    " correspondences within xi of the estimate");
  }
  result->inliers = std::move(inliers);
}

}  // namespace

VocraConfig VocraConfig::from_sigma(double sigma, double xi1_mult,
                                    double xi2_mult, double theta) {
  VocraConfig c;
  c.sigma = sigma;
  c.xi1 = xi1_mult * sigma;
  c.xi2 = xi2_mult * sigma;
  c.theta = theta;
  return c;
}

void VocraConfig::validate() const {
  const bool positive = sigma > 0.0 && xi1 > 0.0 && xi2 > 0.0 && theta > 0.0 &&
                        vote_mu > 0.0 && gnc_mu0 > 0.0 && gnc_decay > 1.0;
  if (!positive || !(xi1 < xi2)) {
    throw Error(ErrorCode::kInvalidArgument,
                "configuration needs positive values, decay > 1, xi1 < xi2");
  }
}

RegistrationResult vocra(const CorrespondenceSet& correspondences,
                         const VocraConfig& config) {
  const auto start = Clock::now();
  config.validate();
  const std::size_t n = correspondences.size();
  if (n < 3) {
    throw Error(ErrorCode::kInsufficientCorrespondences,
                "registration needs at least 3 correspondences, got " +
                    std::to_string(n));
  }

  RegistrationResult result;
  Diagnostics& diag = result.diagnostics;

  auto stage = Clock::now();
  const VoteKernel kernel{KernelKind::kTukeyBiweight, {config.vote_mu, config.xi1}};
  const VoteTable votes = voting_tb(correspondences, config.xi1, kernel);
  diag.vote_seconds = seconds_since(stage);
  diag.e_in = votes.early_exit;
  diag.vote_rows = votes.rows_processed;
  diag.max_vote = votes.votes[votes.order.front()];
  diag.min_vote = votes.votes[votes.order.back()];

  stage = Clock::now();
  ConsensusConfig cc;
  cc.xi = config.xi2;
  cc.theta = config.theta;
  cc.min_inliers =
      config.min_inliers > 0 ? config.min_inliers : min_inlier_schedule(n);
  cc.e_in = votes.early_exit;
  cc.averaging = config.averaging;
  const ConsensusResult consensus =
      max_rot_consensus(correspondences, votes.order, cc);
  diag.consensus_seconds = seconds_since(stage);
  diag.candidate_size = consensus.inlier_candidates.size();
  diag.consensus_size = consensus.consensus_size;
  diag.consensus_early_break = consensus.early_break;
  diag.triples_solved = consensus.triples_solved;
  diag.averaging_calls = consensus.averaging_calls;

  stage = Clock::now();
  GncOptions gnc_options;
  gnc_options.initial_mu = config.gnc_mu0;
  gnc_options.decay = config.gnc_decay;
  const GncTrace gnc = solve_gnc_tb(correspondences, consensus.inlier_candidates,
                                    config.xi2, gnc_options);
  diag.gnc_seconds = seconds_since(stage);
  diag.gnc_iterations = gnc.iterations;
  diag.gnc_final_mu = gnc.final_mu;
  diag.gnc_converged = gnc.converged;

  result.transform = {gnc.rotation, gnc.q_centroid - gnc.rotation * gnc.p_centroid};
  refine_inliers(correspondences, config.xi2, config.max_refit_rounds, &result);
  result.runtime_seconds = seconds_since(start);
  return result;
}

RegistrationResult ransac_baseline(const CorrespondenceSet& correspondences,
                                   double xi, std::size_t max_iters, Rng& rng) {
  const auto start = Clock::now();
  const std::size_t n = correspondences.size();
  if (n < 3) {
    throw Error(ErrorCode::kInsufficientCorrespondences,
                "RANSAC needs at least 3 correspondences, got " +
                    std::to_string(n));
  }
  constexpr double kConfidence = 0.99;
  std::uniform_int_distribution<Index> pick(0, n - 1);

  RegistrationResult result;
  std::size_t best_count = 0;
  std::size_t needed = max_iters;
  std::size_t it = 0;
  for (; it < std::min(max_iters, needed); ++it) {
    const Index a = pick(rng);
    Index b = pick(rng);
    while (b == a) b = pick(rng);
    Index c = pick(rng);
    while (c == a || c == b) c = pick(rng);

    const auto& p = correspondences;
    const auto r = try_horn_triad_rotation(p.p(a), p.p(b), p.p(c), p.q(a),
                                           p.q(b), p.q(c));
    if (!r) continue;
    const Vec3 p_mean = (p.p(a) + p.p(b) + p.p(c)) / 3.0;
    const Vec3 q_mean = (p.q(a) + p.q(b) + p.q(c)) / 3.0;
    const RigidTransform hypothesis{*r, q_mean - *r * p_mean};

    std::size_t count = 0;
    for (Index i = 0; i < n; ++i) {
      if ((hypothesis.apply(p.p(i)) - p.q(i)).norm() <= xi) ++count;
    }
    if (count > best_count) {
      best_count = count;
      result.transform = hypothesis;
      const double inlier_ratio = static_cast<double>(count) / static_cast<double>(n);
      const double all_inlier = std::pow(inlier_ratio, 3);
      if (all_inlier >= 1.0) {
        needed = 0;
      } else if (all_inlier > 0.0) {
        const double k = std::log(1.0 - kConfidence) / std::log(1.0 - all_inlier);
        needed = static_cast<std::size_t>(std::min<double>(std::ceil(k), 1e18));
      }
    }
  }
  result.diagnostics.ransac_iterations = it;
  if (best_count < 3) {
    throw Error(ErrorCode::kNoConsensus,
                "no hypothesis reached 3 inliers in " + std::to_string(it) +
                    " iterations");
  }
  refine_inliers(correspondences, xi, 10, &result);
  result.runtime_seconds = seconds_since(start);
  return result;
}

double rotation_error(const RotationMatrix& gt, const RotationMatrix& est) {
  return geodesic_distance(gt, est) * 180.0 / std::numbers::pi;
}

double translation_error(const Vec3& gt, const Vec3& est) {
  return (gt - est).norm();
}

}  // namespace vocra
