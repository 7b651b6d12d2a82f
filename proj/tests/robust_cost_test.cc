#include "vocra/robust_cost.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vocra/error.h"

namespace vocra {
namespace {

TEST(TbSurrogateCost, Examples) {
  const GncParams unit{1.0, 1.0};
  EXPECT_EQ(tb_surrogate_cost(0.0, unit), 0.0);
  // r^2 = 0.5: 0.5 - 0.25 + 0.125 / 3.
  EXPECT_NEAR(tb_surrogate_cost(std::sqrt(0.5), unit), 0.29167, 1e-5);
  // Both branches give 1/3 at the boundary when mu = 1.
  EXPECT_NEAR(tb_surrogate_cost(1.0, unit), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(tb_surrogate_cost(1.0 + 1e-12, unit), 1.0 / 3.0, 1e-15);
  const GncParams scaled{1.0, 0.2};
  EXPECT_NEAR(tb_surrogate_cost(0.2, scaled), 1.0 / 3.0, 1e-12);
}

TEST(TbSurrogateCost, NondecreasingForUnitMu) {
  const GncParams p{1.0, 0.3};
  double prev = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double v = tb_surrogate_cost(0.5 * i / 500.0, p);
    EXPECT_GE(v, prev - 1e-15);
    prev = v;
  }
}

TEST(TbOutlierProcess, Examples) {
  const GncParams unit{1.0, 1.0};
  EXPECT_NEAR(tb_outlier_process(1.0, unit), 0.0, 1e-15);
  EXPECT_NEAR(tb_outlier_process(0.0, unit), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(tb_outlier_process(0.25, unit), 0.16667, 1e-5);
  const GncParams p{4.0, 0.5};
  EXPECT_NEAR(tb_outlier_process(0.0, p), 4.0 * 0.25 / 3.0, 1e-15);
  for (int i = 0; i <= 100; ++i) EXPECT_GE(tb_outlier_process(i / 100.0, p), -1e-15);
}

TEST(TbWeight, Examples) {
  const GncParams p{2.0, 0.5};
  const double bound = std::sqrt(p.mu) * p.xi;
  EXPECT_EQ(tb_weight(0.0, p), 1.0);
  EXPECT_EQ(tb_weight(bound, p), 0.0);
  EXPECT_EQ(tb_weight(2.0 * bound, p), 0.0);
  EXPECT_NEAR(tb_weight(bound * std::sqrt(0.5), p), 0.25, 1e-12);
}

TEST(TbWeight, MonotoneAndLenientForLargeMu) {
  const GncParams p{1.0, 0.1};
  double prev = 1.0;
  for (int i = 0; i <= 200; ++i) {
    const double w = tb_weight(0.2 * i / 200.0, p);
    EXPECT_LE(w, prev);
    EXPECT_GE(w, 0.0);
    prev = w;
  }
  EXPECT_GT(tb_weight(0.5, GncParams{1e8, 0.1}), 0.999);
  EXPECT_EQ(tb_weight(0.1000001, GncParams{1.0, 0.1}), 0.0);
}

TEST(TbStationarity, ZeroAtClosedFormWeight) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const GncParams p{1.0 + 99.0 * u(rng), 0.01 + u(rng)};
    const double r = u(rng) * std::sqrt(p.mu) * p.xi;
    EXPECT_LT(std::abs(tb_stationarity_residual(r, tb_weight(r, p), p)), 1e-12);
  }
  EXPECT_EQ(tb_stationarity_residual(0.0, 1.0, GncParams{}), 0.0);
}

TEST(TbStationarity, MatchesFiniteDifference) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    const GncParams p{1.0 + 10.0 * u(rng), 0.05 + u(rng)};
    const double r = 1.5 * u(rng) * std::sqrt(p.mu) * p.xi;
    const double w = 0.01 + 0.98 * u(rng);
    const double fd = (tb_objective(r, w + h, p) - tb_objective(r, w - h, p)) / (2 * h);
    EXPECT_NEAR(fd, tb_stationarity_residual(r, w, p), 1e-6);
  }
}

TEST(TbObjective, ConsistentWithOutlierProcess) {
  const GncParams p{3.0, 0.4};
  const double scale = p.mu * p.xi * p.xi;
  for (double r : {0.0, 0.1, 0.5, 2.0}) {
    for (double w : {0.0, 0.3, 1.0}) {
      const double expected = w * r * r / scale + tb_outlier_process(w, p) / scale;
      EXPECT_NEAR(tb_objective(r, w, p), expected, 1e-14);
    }
  }
}

TEST(TbObjective, ClosedFormWeightIsTheMinimizer) {
  // Grid search over [0, 1] as an independent oracle.
  const GncParams p{2.5, 0.3};
  for (double r : {0.0, 0.1, 0.2, 0.35, 0.47, 0.6}) {
    double best_w = 0.0;
    double best = tb_objective(r, 0.0, p);
    for (int i = 1; i <= 100000; ++i) {
      const double w = i / 100000.0;
      const double v = tb_objective(r, w, p);
      if (v < best) {
        best = v;
        best_w = w;
      }
    }
    EXPECT_NEAR(tb_weight(r, p), best_w, 1e-4) << "r = " << r;
  }
}

TEST(GncParams, Validation) {
  EXPECT_THROW((GncParams{0.0, 1.0}.validate()), Error);
  EXPECT_THROW((GncParams{1.0, -1.0}.validate()), Error);
  EXPECT_NO_THROW((GncParams{1.0, 1.0}.validate()));
}

TEST(VoteIncrement, TbExamples) {
  const VoteKernel k{KernelKind::kTukeyBiweight, {1.5, 0.03}};
  EXPECT_EQ(vote_increment(0.0, k), 1.0);
  EXPECT_NEAR(vote_increment(2.0 * 0.03 * std::sqrt(1.5), k), 0.0, 1e-24);
  EXPECT_EQ(vote_increment(2.0 * 0.03 * std::sqrt(1.5) + 1e-9, k), 0.0);
  EXPECT_NEAR(vote_increment(2.0 * 0.03, k), 1.0 / 9.0, 1e-12);
}

TEST(VoteIncrement, ZeroOne) {
  const VoteKernel k{KernelKind::kZeroOne, {1.5, 0.03}};
  EXPECT_EQ(vote_increment(0.0, k), 1.0);
  EXPECT_EQ(vote_increment(0.06, k), 1.0);
  EXPECT_EQ(vote_increment(0.0600001, k), 0.0);
  EXPECT_DOUBLE_EQ(k.support(), 0.06);
}

TEST(VoteIncrement, AllKernelsShareBoundaryBehaviour) {
  for (KernelKind kind :
       {KernelKind::kZeroOne, KernelKind::kTukeyBiweight, KernelKind::kGemanMcClure,
        KernelKind::kCauchy, KernelKind::kLeclerc, KernelKind::kTruncatedLS}) {
    const VoteKernel k{kind, {1.5, 0.02}};
    EXPECT_EQ(vote_increment(0.0, k), 1.0) << kernel_name(kind);
    EXPECT_EQ(vote_increment(k.support() * 1.0001, k), 0.0) << kernel_name(kind);
    EXPECT_EQ(vote_increment(10.0, k), 0.0) << kernel_name(kind);
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
      const double v = vote_increment(k.support() * i / 100.0, k);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(VoteIncrement, StandardWeightFunctions) {
  const GncParams p{1.5, 0.02};
  const double c = 2.0 * p.xi * std::sqrt(p.mu);
  const double s = 0.5 * c;
  EXPECT_NEAR(vote_increment(s, {KernelKind::kGemanMcClure, p}), 1.0 / (1.25 * 1.25), 1e-12);
  EXPECT_NEAR(vote_increment(s, {KernelKind::kCauchy, p}), 1.0 / 1.25, 1e-12);
  EXPECT_NEAR(vote_increment(s, {KernelKind::kLeclerc, p}), std::exp(-0.25), 1e-12);
  EXPECT_EQ(vote_increment(s, {KernelKind::kTruncatedLS, p}), 1.0);
}

TEST(KernelKind, NamesRoundTrip) {
  for (const char* name : {"zeroone", "tb", "gm", "cauchy", "leclerc", "tls"}) {
    const auto kind = parse_kernel_kind(name);
    ASSERT_TRUE(kind.has_value()) << name;
    EXPECT_EQ(kernel_name(*kind), name);
  }
  EXPECT_FALSE(parse_kernel_kind("huber").has_value());
}

}  // namespace
}  // namespace vocra
