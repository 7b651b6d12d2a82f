#include "vocra/synthbench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "vocra/io.h"
#include "vocra/pipeline.h"

namespace vocra {

std::string_view outlier_mode_name(OutlierMode mode) {
  switch (mode) {
    case OutlierMode::kSphereRadius1: return "sphere";
    case OutlierMode::kOnSurface: return "on-surface";
  }
  return "unknown";
}

std::optional<OutlierMode> parse_outlier_mode(std::string_view name) {
  if (name == "sphere") return OutlierMode::kSphereRadius1;
  if (name == "on-surface") return OutlierMode::kOnSurface;
  return std::nullopt;
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::kVocra: return "vocra";
    case SolverKind::kRansac: return "ransac";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  if (name == "vocra") return SolverKind::kVocra;
  if (name == "ransac") return SolverKind::kRansac;
  return std::nullopt;
}

void BenchConfig::validate() const {
  const bool ok = n >= 3 && outlier_rate >= 0.0 && outlier_rate < 1.0 &&
                  sigma > 0.0 && theta > 0.0 && translation_bound > 0.0 &&
                  xi1_mult > 0.0 && xi2_mult > xi1_mult && vote_mu > 0.0;
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument, "invalid benchmark configuration");
  }
}

std::vector<Vec3> normalize_to_unit_cube(std::span<const Vec3> points) {
  if (points.empty()) return {};
  Vec3 lo = points.front();
  Vec3 hi = points.front();
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec3 center = 0.5 * (lo + hi);
  const double extent = (hi - lo).maxCoeff();
  const double scale = extent > 0.0 ? 1.0 / extent : 1.0;
  std::vector<Vec3> out;
  out.reserve(points.size());
  for (const Vec3& p : points) out.push_back(scale * (p - center));
  return out;
}

std::vector<Vec3> synthetic_model(std::size_t count, std::uint64_t seed) {
  // Star-shaped lobed surface over the sphere, stretched along x.
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = 2.0 * std::numbers::pi * unit(rng);
    const double v = std::acos(1.0 - 2.0 * unit(rng));
    const double r = 1.0 + 0.25 * std::sin(3.0 * u) * std::sin(2.0 * v) +
                     0.15 * std::cos(5.0 * v) + 0.1 * std::cos(2.0 * u + v);
    points.emplace_back(1.0 * r * std::sin(v) * std::cos(u),
                        0.95 * r * std::sin(v) * std::sin(u),
                        0.8 * r * std::cos(v));
  }
  return normalize_to_unit_cube(points);
}

Instance generate_instance(std::span<const Vec3> model,
                           const BenchConfig& config, Rng& rng) {
  config.validate();
  const std::size_t n = config.n;
  if (model.size() < n) {
    throw Error(ErrorCode::kInvalidArgument,
                "model has " + std::to_string(model.size()) + " < " +
                    std::to_string(n) + " points");
  }

  std::vector<Vec3> chosen;
  if (model.size() == n) {
    chosen.assign(model.begin(), model.end());
  } else {
    std::vector<Index> pool(model.size());
    std::iota(pool.begin(), pool.end(), Index{0});
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    for (Index i : pool) chosen.push_back(model[i]);
  }
  std::vector<Vec3> p = normalize_to_unit_cube(chosen);

  Instance inst;
  inst.ground_truth.rotation = random_rotation(rng);
  inst.ground_truth.translation = random_in_ball(rng, config.translation_bound);

  std::normal_distribution<double> noise(0.0, config.sigma);
  std::vector<Vec3> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 eps(noise(rng), noise(rng), noise(rng));
    q[i] = inst.ground_truth.apply(p[i]) + eps;
  }

  const auto num_outliers = static_cast<std::size_t>(
      std::floor(config.outlier_rate * static_cast<double>(n) + 1e-9));
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  std::vector<bool> is_outlier(n, false);
  for (std::size_t k = 0; k < num_outliers; ++k) is_outlier[perm[k]] = true;

  Vec3 centroid = Vec3::Zero();
  for (const Vec3& pi : p) centroid += pi;
  centroid /= static_cast<double>(n);
  const Vec3 outlier_center = inst.ground_truth.apply(centroid);

  std::uniform_int_distribution<Index> other(0, n - 2);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_outlier[i]) {
      inst.true_inliers.push_back(i);
      continue;
    }
    if (config.outlier_mode == OutlierMode::kSphereRadius1) {
      q[i] = outlier_center + random_in_ball(rng, 1.0);
    } else {
      Index m = other(rng);
      if (m >= i) ++m;
      q[i] = inst.ground_truth.apply(p[m]);
    }
  }
  inst.correspondences = CorrespondenceSet(std::move(p), std::move(q), config.sigma);
  return inst;
}

std::pair<double, double> precision_recall(std::span<const Index> estimated,
                                           std::span<const Index> truth) {
  std::vector<Index> common;
  std::set_intersection(estimated.begin(), estimated.end(), truth.begin(),
                        truth.end(), std::back_inserter(common));
  const double hits = static_cast<double>(common.size());
  const double precision =
      estimated.empty() ? 0.0 : hits / static_cast<double>(estimated.size());
  const double recall =
      truth.empty() ? 1.0 : hits / static_cast<double>(truth.size());
  return {precision, recall};
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& config,
                                       std::span<const SolverKind> solvers,
                                       std::span<const Vec3> model) {
  config.validate();
  if (solvers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no solver selected");
  }
  std::vector<Vec3> synthetic;
  if (model.empty()) {
    synthetic = synthetic_model(config.n);
    model = synthetic;
  }
  VocraConfig vc = VocraConfig::from_sigma(config.sigma, config.xi1_mult,
                                           config.xi2_mult, config.theta);
  vc.vote_mu = config.vote_mu;

  std::vector<BenchRecord> records;
  records.reserve(config.trials * solvers.size());
  for (std::size_t trial = 0; trial < config.trials; ++trial) {
    Rng rng(config.seed + trial);
    const Instance inst = generate_instance(model, config, rng);

    for (SolverKind solver : solvers) {
      BenchRecord rec;
      rec.trial = trial;
      rec.solver = std::string(solver_name(solver));
      rec.outlier_rate = config.outlier_rate;
      rec.outlier_mode = config.outlier_mode;
      const auto start = std::chrono::steady_clock::now();
      try {
        RegistrationResult res;
        if (solver == SolverKind::kVocra) {
          res = vocra(inst.correspondences, vc);
        } else {
          std::seed_seq seq{config.seed, static_cast<std::uint64_t>(trial),
                            std::uint64_t{1}};
          Rng solver_rng(seq);
          res = ransac_baseline(inst.correspondences, vc.xi2,
                                config.ransac_max_iters, solver_rng);
        }
        rec.rot_err_deg =
            rotation_error(inst.ground_truth.rotation, res.transform.rotation);
        rec.trans_err = translation_error(inst.ground_truth.translation,
                                          res.transform.translation);
        std::tie(rec.precision, rec.recall) =
            precision_recall(res.inliers, inst.true_inliers);
        rec.e_in = res.diagnostics.e_in;
      } catch (const Error& e) {
        rec.status = std::string(error_name(e.code()));
        rec.rot_err_deg = std::numeric_limits<double>::quiet_NaN();
        rec.trans_err = std::numeric_limits<double>::quiet_NaN();
      }
      rec.runtime_s =
          config.record_runtime
              ? std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count()
              : 0.0;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

void write_csv(std::ostream& out, std::span<const BenchRecord> records) {
  out << "trial,solver,outlier_rate,rot_err_deg,trans_err,runtime_s,precision,"
         "recall,status\n";
  for (const BenchRecord& r : records) {
    out << r.trial << ',' << r.solver << ',' << format_double(r.outlier_rate)
        << ',' << format_double(r.rot_err_deg) << ','
        << format_double(r.trans_err) << ',' << format_double(r.runtime_s)
        << ',' << format_double(r.precision) << ','
        << format_double(r.recall) << ',' << r.status << '\n';
  }
}

void write_json(std::ostream& out, std::span<const BenchRecord> records) {
  auto number = [](double v) -> nlohmann::json {
    if (!std::isfinite(v)) return nullptr;
    return v;
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const BenchRecord& r : records) {
    arr.push_back({{"trial", r.trial},
                   {"solver", r.solver},
                   {"outlier_rate", r.outlier_rate},
                   {"rot_err_deg", number(r.rot_err_deg)},
                   {"trans_err", number(r.trans_err)},
                   {"runtime_s", r.runtime_s},
                   {"precision", r.precision},
                   {"recall", r.recall},
                   {"status", r.status},
                   {"outlier_mode", std::string(outlier_mode_name(r.outlier_mode))}});
  }
  out << arr.dump(2) << '\n';
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  const double lo = values[mid - 1];
  const double hi = values[mid];
  return 0.5 * (lo + hi);
}

std::vector<RateSummary> summarize(std::span<const BenchRecord> records) {
  struct Group {
    RateSummary summary;
    std::vector<double> rot, trans, runtime;
  };
  std::vector<Group> groups;
  for (const BenchRecord& r : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.summary.solver == r.solver &&
             g.summary.outlier_rate == r.outlier_rate;
    });
    if (it == groups.end()) {
      groups.push_back({});
      it = std::prev(groups.end());
      it->summary.solver = r.solver;
      it->summary.outlier_rate = r.outlier_rate;
    }
    constexpr double kInf = std::numeric_limits<double>::infinity();
    ++it->summary.trials;
    if (!r.ok()) ++it->summary.failures;
    it->rot.push_back(r.ok() ? r.rot_err_deg : kInf);
    it->trans.push_back(r.ok() ? r.trans_err : kInf);
    it->runtime.push_back(r.runtime_s);
  }
  std::vector<RateSummary> out;
  for (Group& g : groups) {
    g.summary.median_rot_err_deg = median(g.rot);
    g.summary.median_trans_err = median(g.trans);
    g.summary.median_runtime_s = median(g.runtime);
    out.push_back(g.summary);
  }
  return out;
}

}  // namespace vocra
