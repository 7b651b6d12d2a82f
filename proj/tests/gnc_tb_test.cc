#include "vocra/gnc_tb.h"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "test_support.h"

namespace vocra {
namespace {

std::vector<Index> all_indices(std::size_t n) {
  std::vector<Index> v(n);
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

TEST(SolveGncTb, NoiselessCandidate) {
  std::mt19937_64 rng(1);
  const testing::Scene s = testing::make_scene(rng, 20, 0);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace trace = solve_gnc_tb(pairs, all_indices(20), 0.05);
  EXPECT_LT(geodesic_distance(trace.rotation, s.truth.rotation), 1e-9);
  EXPECT_EQ(trace.final_weights, std::vector<double>(20, 1.0));
  EXPECT_TRUE(trace.converged);
  EXPECT_GE(trace.iterations, 1u);
  // Centroids give back the translation.
  const Vec3 t = trace.q_centroid - trace.rotation * trace.p_centroid;
  EXPECT_LT((t - s.truth.translation).norm(), 1e-9);
}

TEST(SolveGncTb, RejectsGrossOutliers) {
  std::mt19937_64 rng(2);
  const testing::Scene s = testing::make_scene(rng, 40, 10, 0.01);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace trace = solve_gnc_tb(pairs, all_indices(50), 0.05);
  for (Index i = 40; i < 50; ++i) EXPECT_EQ(trace.final_weights[i], 0.0) << i;

  std::vector<double> oracle(50, 0.0);
  for (Index i = 0; i < 40; ++i) oracle[i] = 1.0;
  const RotationMatrix clean = weighted_svd_rotation(pairs, oracle);
  // Noise floor of a 40-point fit with sigma = 0.01 in the unit cube.
  EXPECT_LT(geodesic_distance(trace.rotation, clean), 0.01);
  EXPECT_LT(geodesic_distance(trace.rotation, s.truth.rotation), 0.02);
}

TEST(SolveGncTb, MuScheduleRunsTwentySixIterations) {
  // ceil(ln 100 / ln 1.2) = 26.
  EXPECT_EQ(std::ceil(std::log(100.0) / std::log(1.2)), 26.0);
  std::mt19937_64 rng(3);
  const testing::Scene s = testing::make_scene(rng, 40, 10, 0.01);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace trace = solve_gnc_tb(pairs, all_indices(50), 0.05);
  EXPECT_FALSE(trace.converged);
  EXPECT_EQ(trace.iterations, 26u);
  EXPECT_LT(trace.final_mu, 1.0);
  EXPECT_NEAR(trace.final_mu, 100.0 / std::pow(1.2, 26), 1e-12);
  ASSERT_EQ(trace.history.size(), 26u);
  EXPECT_EQ(trace.history.front().mu, 100.0);
}

TEST(SolveGncTb, WeightsStayInUnitInterval) {
  std::mt19937_64 rng(4);
  const testing::Scene s = testing::make_scene(rng, 30, 20, 0.01);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace trace = solve_gnc_tb(pairs, all_indices(50), 0.05);
  for (double w : trace.final_weights) {
    EXPECT_GE(w, 0.0);
    EXPECT_LE(w, 1.0);
  }
}

TEST(SolveGncTb, ObjectiveDescendsWithinEachIteration) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    const testing::Scene s = testing::make_scene(rng, 30, 20, 0.01);
    const CorrespondenceSet pairs(s.p, s.q, 0.01);
    const GncTrace trace = solve_gnc_tb(pairs, all_indices(50), 0.05);
    for (std::size_t t = 0; t < trace.history.size(); ++t) {
      const GncIterationStats& h = trace.history[t];
      if (t == 0) {
        EXPECT_TRUE(std::isnan(h.objective_before));
      } else {
        EXPECT_LE(h.objective_after_rotation, h.objective_before + 1e-9);
      }
      EXPECT_LE(h.objective_after_weights, h.objective_after_rotation + 1e-12);
    }
  }
}

TEST(SolveGncTb, FixedPointOfConvergedSolution) {
  std::mt19937_64 rng(5);
  const testing::Scene s = testing::make_scene(rng, 25, 8);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace first = solve_gnc_tb(pairs, all_indices(33), 0.05);
  GncOptions again;
  again.initial_weights = first.final_weights;
  const GncTrace second = solve_gnc_tb(pairs, all_indices(33), 0.05, again);
  EXPECT_LT(geodesic_distance(first.rotation, second.rotation), 1e-9);
  EXPECT_LT(geodesic_distance(first.rotation, s.truth.rotation), 1e-9);
}

TEST(SolveGncTb, UsesOnlyCandidatePairs) {
  std::mt19937_64 rng(6);
  const testing::Scene s = testing::make_scene(rng, 10, 40);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace trace = solve_gnc_tb(pairs, s.inliers, 0.05);
  EXPECT_EQ(trace.final_weights.size(), 10u);
  EXPECT_LT(geodesic_distance(trace.rotation, s.truth.rotation), 1e-9);
}

TEST(SolveGncTb, Errors) {
  std::mt19937_64 rng(7);
  const testing::Scene s = testing::make_scene(rng, 10, 0);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  auto code_of = [&](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  EXPECT_EQ(code_of([&] { solve_gnc_tb(pairs, std::vector<Index>{0, 1}, 0.05); }),
            ErrorCode::kDegenerateCandidate);
  EXPECT_EQ(code_of([&] { solve_gnc_tb(pairs, std::vector<Index>{0, 1, 99}, 0.05); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { solve_gnc_tb(pairs, std::vector<Index>{0, 1, 1}, 0.05); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { solve_gnc_tb(pairs, all_indices(10), 0.0); }),
            ErrorCode::kInvalidArgument);

  std::vector<Vec3> line;
  for (int i = 0; i < 6; ++i) line.emplace_back(0.1 * i, 0.0, 0.0);
  const CorrespondenceSet collinear(line, line, 0.01);
  EXPECT_EQ(code_of([&] { solve_gnc_tb(collinear, all_indices(6), 0.05); }),
            ErrorCode::kDegenerateCandidate);

  // Mutually inconsistent pairs: no residual fits under a tiny threshold.
  std::vector<Vec3> p{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::vector<Vec3> q{{0, 0, 0}, {-5, 3, 0}, {4, 0, 9}, {0, -7, 2}};
  EXPECT_EQ(code_of([&] { solve_gnc_tb(CorrespondenceSet(p, q, 0.01), all_indices(4), 1e-3); }),
            ErrorCode::kDegenerateCandidate);
}

TEST(SolveGncTb, Deterministic) {
  std::mt19937_64 rng(8);
  const testing::Scene s = testing::make_scene(rng, 30, 10, 0.01);
  const CorrespondenceSet pairs(s.p, s.q, 0.01);
  const GncTrace a = solve_gnc_tb(pairs, all_indices(40), 0.05);
  const GncTrace b = solve_gnc_tb(pairs, all_indices(40), 0.05);
  EXPECT_TRUE(a.rotation == b.rotation);
  EXPECT_EQ(a.final_weights, b.final_weights);
}

}  // namespace
}  // namespace vocra
