#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vocra/geometry.h"

namespace vocra {

enum class OutlierMode {
  // Uniform in the radius-1 ball around the transformed model centroid.
  kSphereRadius1,
  // Another transformed model point.
  kOnSurface,
};

std::string_view outlier_mode_name(OutlierMode mode);
// Accepts "sphere" and "on-surface".
std::optional<OutlierMode> parse_outlier_mode(std::string_view name);

enum class SolverKind { kVocra, kRansac };

std::string_view solver_name(SolverKind kind);
std::optional<SolverKind> parse_solver(std::string_view name);

struct BenchConfig {
  std::size_t n = 1000;
  double outlier_rate = 0.5;
  double sigma = 0.01;
  double theta = 0.15;
  double translation_bound = 3.0;
  OutlierMode outlier_mode = OutlierMode::kSphereRadius1;
  std::uint64_t seed = 42;
  std::size_t trials = 30;

  double xi1_mult = 3.0;
  double xi2_mult = 5.0;
  double vote_mu = 1.5;
  std::size_t ransac_max_iters = 1000;
  // When false, runtime_s is written as 0 so reruns are byte-identical.
  bool record_runtime = true;

  void validate() const;
};

struct Instance {
  CorrespondenceSet correspondences;
  RigidTransform ground_truth;
  // Sorted indices of the correspondences that were not replaced.
  std::vector<Index> true_inliers;
};

struct BenchRecord {
  std::size_t trial = 0;
  std::string solver;
  double outlier_rate = 0.0;
  OutlierMode outlier_mode = OutlierMode::kSphereRadius1;
  double rot_err_deg = 0.0;
  double trans_err = 0.0;
  double runtime_s = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  // "ok" or the solver's error name.
  std::string status = "ok";
  // Diagnostics useful for reporting.
  bool e_in = false;

  bool ok() const { return status == "ok"; }
};

// Deterministic closed bumpy surface with `count` samples, already inside
// the [-0.5, 0.5]^3 cube.
std::vector<Vec3> synthetic_model(std::size_t count, std::uint64_t seed = 7);

// Translate and uniformly scale so the bounding box is centered at the
// origin with its longest side equal to 1.
std::vector<Vec3> normalize_to_unit_cube(std::span<const Vec3> points);

/// Builds one benchmark instance from a model cloud.
///
/// Picks n model points (random subset when the model is larger), fits them
/// into the unit cube, applies a Haar-random rotation and a translation
/// uniform in the ball of radius translation_bound, adds per-component
/// Gaussian noise of std sigma and replaces floor(rate * n) uniformly chosen
/// q-points by outliers.
Instance generate_instance(std::span<const Vec3> model,
                           const BenchConfig& config, Rng& rng);

// Precision and recall of `estimated` against `truth` (both sorted).
std::pair<double, double> precision_recall(std::span<const Index> estimated,
                                           std::span<const Index> truth);

/// Runs every solver on `trials` instances. Trial t draws its instance from
/// a generator seeded with seed + t, so the records depend only on
/// (config, solvers, model). Solver failures become records with a non-ok
/// status. An empty model selects synthetic_model(n).
std::vector<BenchRecord> run_benchmark(const BenchConfig& config,
                                       std::span<const SolverKind> solvers,
                                       std::span<const Vec3> model = {});

void write_csv(std::ostream& out, std::span<const BenchRecord> records);
void write_json(std::ostream& out, std::span<const BenchRecord> records);

struct RateSummary {
  std::string solver;
  double outlier_rate = 0.0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  // Failed trials count as infinite error.
  double median_rot_err_deg = 0.0;
  double median_trans_err = 0.0;
  double median_runtime_s = 0.0;
};

// Grouped by (solver, outlier_rate) in first-seen order.
std::vector<RateSummary> summarize(std::span<const BenchRecord> records);

double median(std::vector<double> values);

}  // namespace vocra
