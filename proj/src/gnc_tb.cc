#include "vocra/gnc_tb.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vocra/robust_cost.h"

namespace vocra {

namespace {

double objective(const CorrespondenceSet& pairs, const RotationMatrix& rotation,
                 const Vec3& p_bar, const Vec3& q_bar,
                 std::span<const double> weights, const GncParams& params) {
  double total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double r = (rotation * (pairs.p(i) - p_bar) - (pairs.q(i) - q_bar)).norm();
    total += tb_objective(r, weights[i], params);
  }
  return total;
}

}  // namespace

GncTrace solve_gnc_tb(const CorrespondenceSet& correspondences,
                      std::span<const Index> candidate, double xi,
                      const GncOptions& options) {
  if (!(xi > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "xi must be positive");
  }
  if (!(options.initial_mu > 0.0) || !(options.decay > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need mu0 > 0 and decay > 1");
  }
  if (candidate.size() < 3) {
    throw Error(ErrorCode::kDegenerateCandidate,
                "candidate set has " + std::to_string(candidate.size()) +
                    " < 3 correspondences");
  }
  std::vector<bool> seen(correspondences.size(), false);
  for (Index i : candidate) {
    if (i >= correspondences.size() || seen[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "candidate indices must be valid and unique");
    }
    seen[i] = true;
  }
  const CorrespondenceSet pairs = correspondences.subset(candidate);
  const std::size_t m = pairs.size();

  std::vector<double> weights = options.initial_weights;
  if (weights.empty()) weights.assign(m, 1.0);
  if (weights.size() != m) {
    throw Error(ErrorCode::kInvalidArgument, "initial weight count mismatch");
  }

  GncTrace trace;
  double mu = options.initial_mu;
  std::vector<double> residuals(m);
  std::vector<double> next(m);
  RotationMatrix prev_rotation;
  Vec3 prev_p_bar = Vec3::Zero();
  Vec3 prev_q_bar = Vec3::Zero();

  while (true) {
    const GncParams params{mu, xi};
    GncIterationStats stats;
    stats.mu = mu;
    stats.objective_before =
        trace.iterations == 0
            ? std::numeric_limits<double>::quiet_NaN()
            : objective(pairs, prev_rotation, prev_p_bar, prev_q_bar, weights,
                        params);

    RotationMatrix rotation;
    try {
      rotation = weighted_svd_rotation(pairs, weights);
    } catch (const Error& e) {
      throw Error(ErrorCode::kDegenerateCandidate, e.what());
    }
    const Vec3 p_bar = weighted_centroid(pairs.points_p(), weights);
    const Vec3 q_bar = weighted_centroid(pairs.points_q(), weights);

    double after_rotation = 0.0;
    double after_weights = 0.0;
    double max_change = 0.0;
    std::size_t positive = 0;
    for (std::size_t i = 0; i < m; ++i) {
      residuals[i] = (rotation * (pairs.p(i) - p_bar) - (pairs.q(i) - q_bar)).norm();
      next[i] = tb_weight(residuals[i], params);
      after_rotation += tb_objective(residuals[i], weights[i], params);
      after_weights += tb_objective(residuals[i], next[i], params);
      max_change = std::max(max_change, std::abs(next[i] - weights[i]));
      if (next[i] > 0.0) ++positive;
    }
    stats.objective_after_rotation = after_rotation;
    stats.objective_after_weights = after_weights;
    stats.max_weight_change = max_change;
    trace.history.push_back(stats);

    weights.swap(next);
    prev_rotation = rotation;
    prev_p_bar = p_bar;
    prev_q_bar = q_bar;
    trace.rotation = rotation;
    ++trace.iterations;
    mu /= options.decay;

    if (positive < 3) {
      throw Error(ErrorCode::kDegenerateCandidate,
                  "fewer than 3 candidates keep a positive weight");
    }
    if (max_change < options.weight_tolerance) {
      trace.converged = true;
      break;
    }
    if (mu < 1.0) break;
  }

  trace.final_mu = mu;
  trace.p_centroid = weighted_centroid(pairs.points_p(), weights);
  trace.q_centroid = weighted_centroid(pairs.points_q(), weights);
  trace.final_weights = std::move(weights);
  return trace;
}

}  // namespace vocra
