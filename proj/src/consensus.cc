#include "vocra/consensus.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vocra/voting.h"

namespace vocra {

void ConsensusConfig::validate() const {
  if (!(xi > 0.0) || !(theta > 0.0) || min_inliers < 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "consensus needs xi > 0, theta > 0 and I >= 3");
  }
}

std::size_t min_inlier_schedule(std::size_t n) {
  const double nd = static_cast<double>(n);
  double value;
  if (n < 200) {
    value = std::max(0.05 * nd, 5.0);
  } else if (n < 300) {
    value = 0.04 * nd;
  } else if (n < 500) {
    value = 0.03 * nd;
  } else if (n < 1000) {
    value = 0.02 * nd;
  } else {
    value = 0.01 * nd;
  }
  return std::max<std::size_t>(3, static_cast<std::size_t>(std::lround(value)));
}

namespace {

void check_permutation(std::span<const Index> order, std::size_t n) {
  if (order.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "order length differs from N");
  }
  std::vector<bool> seen(n, false);
  for (Index i : order) {
    if (i >= n || seen[i]) {
      throw Error(ErrorCode::kInvalidArgument, "order is not a permutation");
    }
    seen[i] = true;
  }
}

}  // namespace

ConsensusResult max_rot_consensus(const CorrespondenceSet& correspondences,
                                  std::span<const Index> order,
                                  const ConsensusConfig& config,
                                  const ConsensusHooks* hooks) {
  const std::size_t n = correspondences.size();
  if (n < 3) {
    throw Error(ErrorCode::kInsufficientCorrespondences,
                "consensus needs at least 3 correspondences, got " +
                    std::to_string(n));
  }
  config.validate();
  check_permutation(order, n);

  const std::size_t min_inliers = config.min_inliers;
  std::size_t search = n;
  std::size_t num_break = static_cast<std::size_t>(
      std::ceil(1.5 * static_cast<double>(min_inliers)));
  if (!config.e_in) {
    search = std::min(
        n, std::max<std::size_t>(
               3, static_cast<std::size_t>(std::ceil(0.2 * static_cast<double>(n)))));
    num_break = min_inliers;
  }
  // count >= I - 3 with I >= 3.
  const std::size_t trigger = min_inliers - 3;
  const double gap_bound = 2.0 * config.xi;

  const auto p = correspondences.points_p();
  const auto q = correspondences.points_q();
  auto passes = [&](Index i, Index j) {
    return pairwise_scale_gap(p[i], q[i], p[j], q[j]) <= gap_bound;
  };

  ConsensusResult best;
  best.search_size = search;
  best.break_size = num_break;
  bool assigned = false;
  std::size_t k_max = 0;

  std::vector<char> anchor_ok(search);
  std::vector<RotationSample> samples;
  samples.reserve(search);

  for (std::size_t a = 0; a + 2 < search; ++a) {
    const Index i = order[a];
    for (std::size_t c = a + 1; c < search; ++c) {
      anchor_ok[c] = passes(i, order[c]) ? 1 : 0;
    }
    for (std::size_t b = a + 1; b + 1 < search; ++b) {
      if (!anchor_ok[b]) continue;
      const Index j = order[b];
      samples.clear();
      for (std::size_t c = b + 1; c < search; ++c) {
        if (!anchor_ok[c]) continue;
        const Index k = order[c];
        if (!passes(j, k)) continue;
        const auto r = try_horn_triad_rotation(p[i], p[j], p[k], q[i], q[j], q[k]);
        if (!r) continue;
        ++best.triples_solved;
        if (hooks && hooks->on_triple) hooks->on_triple(i, j, k);
        samples.push_back({*r, k});
        if (samples.size() < trigger) continue;

        const RotationMatrix center =
            robust_lee_chordal(samples, config.averaging);
        ++best.averaging_calls;
        std::vector<Index> members =
            chordal_consensus(samples, center, config.theta);
        if (members.size() < k_max) continue;

        k_max = members.size();
        assigned = true;
        best.consensus_size = k_max;
        best.averaged_rotation = center;
        best.anchor_i = i;
        best.anchor_j = j;
        best.inlier_candidates = std::move(members);
        best.inlier_candidates.push_back(i);
        best.inlier_candidates.push_back(j);
        if (hooks && hooks->on_best_update) hooks->on_best_update(k_max);
        if (best.inlier_candidates.size() >= num_break) {
          best.early_break = true;
          return best;
        }
      }
    }
  }

  if (!assigned) {
    throw Error(ErrorCode::kNoConsensus,
                "no anchor pair collected " + std::to_string(trigger) +
                    " scale-consistent triples");
  }
  return best;
}

}  // namespace vocra
