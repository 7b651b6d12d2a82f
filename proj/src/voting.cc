#include "vocra/voting.h"

#include <algorithm>
#include <numeric>
#include <string>

namespace vocra {

VoteTable voting_tb(const CorrespondenceSet& correspondences, double xi,
                    const VoteKernel& kernel) {
  const std::size_t n = correspondences.size();
  if (n < 2) {
    throw Error(ErrorCode::kInsufficientCorrespondences,
                "voting needs at least 2 correspondences, got " +
                    std::to_string(n));
  }
  VoteKernel k = kernel;
  k.params.xi = xi;
  k.params.validate();

  const auto p = correspondences.points_p();
  const auto q = correspondences.points_q();
  const double exit_votes = kEarlyExitVoteFraction * static_cast<double>(n);

  VoteTable table;
  table.votes.assign(n, 0.0);
  std::vector<double>& v = table.votes;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec3& pi = p[i];
    const Vec3& qi = q[i];
    double vi = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double inc = vote_increment(pairwise_scale_gap(pi, qi, p[j], q[j]), k);
      vi += inc;
      v[j] += inc;
    }
    v[i] += vi;
    table.rows_processed = i + 1;
    if (i < kEarlyExitRows && v[i] >= exit_votes) {
      table.early_exit = true;
      break;
    }
  }

  table.order.resize(n);
  std::iota(table.order.begin(), table.order.end(), Index{0});
  std::stable_sort(table.order.begin(), table.order.end(),
                   [&v](Index a, Index b) { return v[a] > v[b]; });
  return table;
}

}  // namespace vocra
