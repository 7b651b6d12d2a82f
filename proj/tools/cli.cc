#include "cli.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>

#include <CLI11.hpp>
#include <json.hpp>

#include "vocra/io.h"
#include "vocra/pipeline.h"
#include "vocra/synthbench.h"
#include "vocra/voting.h"

namespace vocra::cli {

namespace {

using nlohmann::json;

struct SolverFlags {
  double sigma = 0.01;
  double theta = 0.15;
  double xi1_mult = 3.0;
  double xi2_mult = 5.0;
  double vote_mu = 1.5;
};

void add_solver_flags(CLI::App* app, SolverFlags* f) {
  app->add_option("--sigma", f->sigma, "Noise standard deviation per component")
      ->capture_default_str();
  app->add_option("--theta", f->theta, "Chordal consensus threshold")
      ->capture_default_str();
  app->add_option("--xi1-mult", f->xi1_mult, "Voting threshold in units of sigma")
      ->capture_default_str();
  app->add_option("--xi2-mult", f->xi2_mult,
                  "Consensus/inlier threshold in units of sigma")
      ->capture_default_str();
  app->add_option("--vote-mu", f->vote_mu, "TB voting kernel mu")
      ->capture_default_str();
}

VocraConfig make_config(const SolverFlags& f) {
  VocraConfig c = VocraConfig::from_sigma(f.sigma, f.xi1_mult, f.xi2_mult, f.theta);
  c.vote_mu = f.vote_mu;
  c.validate();
  return c;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "failed writing " + path);
}

// Writes through `path` when given, else to `fallback`.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file = open_output(path);
  write(file);
  finish_output(file, path);
}

json rotation_json(const RotationMatrix& r) {
  json rows = json::array();
  const Mat3& m = r.matrix();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) rows.push_back(m(i, j));
  }
  return rows;
}

json diagnostics_json(const Diagnostics& d, bool timing) {
  json j{{"e_in", d.e_in},
         {"vote_rows", d.vote_rows},
         {"max_vote", d.max_vote},
         {"min_vote", d.min_vote},
         {"candidate_size", d.candidate_size},
         {"consensus_size", d.consensus_size},
         {"consensus_early_break", d.consensus_early_break},
         {"triples_solved", d.triples_solved},
         {"averaging_calls", d.averaging_calls},
         {"gnc_iterations", d.gnc_iterations},
         {"gnc_final_mu", d.gnc_final_mu},
         {"gnc_converged", d.gnc_converged},
         {"refit_rounds", d.refit_rounds}};
  j["vote_seconds"] = timing ? d.vote_seconds : 0.0;
  j["consensus_seconds"] = timing ? d.consensus_seconds : 0.0;
  j["gnc_seconds"] = timing ? d.gnc_seconds : 0.0;
  return j;
}

int cmd_register(const std::string& input, const SolverFlags& flags,
                 const std::string& gt_path, const std::string& output,
                 bool timing, std::ostream& out) {
  const VocraConfig config = make_config(flags);
  const CorrespondenceSet pairs = read_correspondences(input, config.sigma);
  std::optional<GroundTruth> gt;
  if (!gt_path.empty()) gt = read_ground_truth(gt_path);

  const RegistrationResult res = vocra::vocra(pairs, config);

  const Vec3& t = res.transform.translation;
  json j{{"rotation", rotation_json(res.transform.rotation)},
         {"translation", {t.x(), t.y(), t.z()}},
         {"inliers", res.inliers},
         {"num_correspondences", pairs.size()},
         {"runtime_s", timing ? res.runtime_seconds : 0.0},
         {"diagnostics", diagnostics_json(res.diagnostics, timing)}};
  if (gt) {
    json eval{{"rot_err_deg", rotation_error(gt->transform.rotation,
                                             res.transform.rotation)},
              {"trans_err", translation_error(gt->transform.translation, t)}};
    if (!gt->inliers.empty()) {
      std::vector<Index> truth = gt->inliers;
      std::sort(truth.begin(), truth.end());
      const auto [precision, recall] = precision_recall(res.inliers, truth);
      eval["precision"] = precision;
      eval["recall"] = recall;
    }
    j["evaluation"] = eval;
  }
  emit(output, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  return kExitOk;
}

struct BenchFlags {
  SolverFlags solver;
  std::size_t n = 1000;
  std::vector<double> rates{0.2, 0.5, 0.8, 0.9, 0.95, 0.97, 0.98, 0.99};
  std::string outlier_mode = "sphere";
  std::size_t trials = 30;
  std::uint64_t seed = 42;
  std::vector<std::string> solvers{"vocra"};
  std::size_t ransac_iters = 1000;
  std::string model;
  std::string output;
  std::string json_path;
  bool no_timing = false;
};

void print_summary(std::ostream& os, std::span<const RateSummary> rows) {
  os << std::left << std::setw(8) << "solver" << ' ' << std::setw(6) << "rate"
     << ' ' << std::setw(6) << "trials" << ' ' << std::setw(8) << "failures"
     << ' ' << std::setw(22) << "med_rot_deg" << ' ' << std::setw(22)
     << "med_trans" << ' ' << "med_runtime_s\n";
  for (const RateSummary& r : rows) {
    os << std::left << std::setw(8) << r.solver << ' ' << std::setw(6)
       << format_double(r.outlier_rate) << ' ' << std::setw(6) << r.trials
       << ' ' << std::setw(8) << r.failures << ' ' << std::setw(22)
       << format_double(r.median_rot_err_deg) << ' ' << std::setw(22)
       << format_double(r.median_trans_err) << ' '
       << format_double(r.median_runtime_s) << '\n';
  }
}

int cmd_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  const auto mode = parse_outlier_mode(f.outlier_mode);
  if (!mode) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown outlier mode '" + f.outlier_mode + "'");
  }
  std::vector<SolverKind> solvers;
  for (const std::string& name : f.solvers) {
    const auto s = parse_solver(name);
    if (!s) throw Error(ErrorCode::kInvalidArgument, "unknown solver '" + name + "'");
    solvers.push_back(*s);
  }
  std::vector<Vec3> model;
  if (!f.model.empty()) model = read_points(f.model);

  std::vector<BenchRecord> records;
  for (double rate : f.rates) {
    BenchConfig c;
    c.n = f.n;
    c.outlier_rate = rate;
    c.sigma = f.solver.sigma;
    c.theta = f.solver.theta;
    c.outlier_mode = *mode;
    c.seed = f.seed;
    c.trials = f.trials;
    c.xi1_mult = f.solver.xi1_mult;
    c.xi2_mult = f.solver.xi2_mult;
    c.vote_mu = f.solver.vote_mu;
    c.ransac_max_iters = f.ransac_iters;
    c.record_runtime = !f.no_timing;
    std::vector<BenchRecord> batch = run_benchmark(c, solvers, model);
    records.insert(records.end(), batch.begin(), batch.end());
  }

  emit(f.output, out, [&](std::ostream& o) { write_csv(o, records); });
  if (!f.json_path.empty()) {
    emit(f.json_path, out, [&](std::ostream& o) { write_json(o, records); });
  }
  print_summary(f.output.empty() ? err : out, summarize(records));
  return kExitOk;
}

struct InspectFlags {
  SolverFlags solver;
  std::string input;
  std::string kernel = "tb";
  std::string ground_truth;
  std::string output;
};

int cmd_vote_inspect(const InspectFlags& f, std::ostream& out,
                     std::ostream& err) {
  const auto kind = parse_kernel_kind(f.kernel);
  if (!kind) {
    throw Error(ErrorCode::kInvalidArgument, "unknown kernel '" + f.kernel + "'");
  }
  const VocraConfig config = make_config(f.solver);
  const CorrespondenceSet pairs = read_correspondences(f.input, config.sigma);
  std::vector<bool> is_inlier;
  if (!f.ground_truth.empty()) {
    const GroundTruth gt = read_ground_truth(f.ground_truth);
    is_inlier.assign(pairs.size(), false);
    for (Index i : gt.inliers) {
      if (i >= pairs.size()) {
        throw Error(ErrorCode::kParseError, "ground-truth inlier index " +
                                                std::to_string(i) + " out of range");
      }
      is_inlier[i] = true;
    }
  }

  const VoteKernel kernel{*kind, {config.vote_mu, config.xi1}};
  const VoteTable table = voting_tb(pairs, config.xi1, kernel);
  std::vector<std::size_t> rank(pairs.size());
  for (std::size_t r = 0; r < table.order.size(); ++r) rank[table.order[r]] = r;

  emit(f.output, out, [&](std::ostream& o) {
    o << "index,votes,rank";
    if (!is_inlier.empty()) o << ",is_inlier";
    o << '\n';
    for (Index i = 0; i < pairs.size(); ++i) {
      o << i << ',' << format_double(table.votes[i]) << ',' << rank[i];
      if (!is_inlier.empty()) o << ',' << (is_inlier[i] ? 1 : 0);
      o << '\n';
    }
  });
  err << "kernel=" << kernel_name(*kind)
      << " e_in=" << (table.early_exit ? "true" : "false")
      << " rows_processed=" << table.rows_processed << '\n';
  return kExitOk;
}

struct GenerateFlags {
  std::size_t n = 1000;
  double rate = 0.5;
  double sigma = 0.01;
  std::string outlier_mode = "sphere";
  std::uint64_t seed = 42;
  std::string model;
  std::string output;
  std::string ground_truth;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  const auto mode = parse_outlier_mode(f.outlier_mode);
  if (!mode) {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown outlier mode '" + f.outlier_mode + "'");
  }
  BenchConfig c;
  c.n = f.n;
  c.outlier_rate = f.rate;
  c.sigma = f.sigma;
  c.outlier_mode = *mode;
  c.seed = f.seed;
  c.validate();
  const std::vector<Vec3> model =
      f.model.empty() ? synthetic_model(c.n) : read_points(f.model);
  // Same stream as trial 0 of a benchmark with this seed.
  Rng rng(c.seed);
  const Instance inst = generate_instance(model, c, rng);

  emit(f.output, out, [&](std::ostream& o) {
    write_correspondences(o, inst.correspondences);
  });
  if (!f.ground_truth.empty()) {
    emit(f.ground_truth, out, [&](std::ostream& o) {
      write_ground_truth(o, {inst.ground_truth, inst.true_inliers});
    });
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidArgument:
      return kExitParse;
    case ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitSolver;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Robust correspondence-based point cloud registration"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vocra 0.1.0");

  SolverFlags reg_flags;
  std::string reg_input, reg_gt, reg_output;
  bool reg_no_timing = false;
  CLI::App* reg = app.add_subcommand("register", "Register a correspondence file");
  reg->add_option("input", reg_input, "Correspondence file (px py pz qx qy qz)")
      ->required();
  add_solver_flags(reg, &reg_flags);
  reg->add_option("--ground-truth", reg_gt, "JSON ground-truth sidecar");
  reg->add_option("--output", reg_output, "Result JSON path (default stdout)");
  reg->add_flag("--no-timing", reg_no_timing, "Report zero runtimes");

  BenchFlags bench_flags;
  CLI::App* bench = app.add_subcommand("bench", "Run the synthetic benchmark");
  add_solver_flags(bench, &bench_flags.solver);
  bench->add_option("--n", bench_flags.n, "Correspondences per instance")
      ->capture_default_str();
  bench->add_option("--outlier-rate", bench_flags.rates, "Outlier rates to sweep")
      ->delimiter(',');
  bench->add_option("--outlier-mode", bench_flags.outlier_mode,
                    "sphere or on-surface")
      ->capture_default_str();
  bench->add_option("--trials", bench_flags.trials, "Trials per rate")
      ->capture_default_str();
  bench->add_option("--seed", bench_flags.seed, "Base seed")->capture_default_str();
  bench->add_option("--solvers", bench_flags.solvers, "vocra and/or ransac")
      ->delimiter(',');
  bench->add_option("--ransac-iters", bench_flags.ransac_iters,
                    "RANSAC iteration cap")
      ->capture_default_str();
  bench->add_option("--model", bench_flags.model,
                    "Model point file (x y z per line); default synthetic");
  bench->add_option("--output", bench_flags.output, "CSV path (default stdout)");
  bench->add_option("--json", bench_flags.json_path, "Also write JSON records");
  bench->add_flag("--no-timing", bench_flags.no_timing,
                  "Write zero runtimes for byte-identical reruns");

  InspectFlags inspect_flags;
  CLI::App* inspect =
      app.add_subcommand("vote-inspect", "Per-correspondence votes and ranks");
  inspect->add_option("input", inspect_flags.input, "Correspondence file")
      ->required();
  add_solver_flags(inspect, &inspect_flags.solver);
  inspect->add_option("--kernel", inspect_flags.kernel,
                      "tb, zeroone, gm, cauchy, leclerc or tls")
      ->capture_default_str();
  inspect->add_option("--ground-truth", inspect_flags.ground_truth,
                      "JSON sidecar providing the true inliers");
  inspect->add_option("--output", inspect_flags.output, "CSV path (default stdout)");

  GenerateFlags gen_flags;
  CLI::App* gen = app.add_subcommand("generate", "Write one synthetic instance");
  gen->add_option("--n", gen_flags.n, "Correspondences")->capture_default_str();
  gen->add_option("--outlier-rate", gen_flags.rate, "Fraction of outliers")
      ->capture_default_str();
  gen->add_option("--sigma", gen_flags.sigma, "Noise standard deviation")
      ->capture_default_str();
  gen->add_option("--outlier-mode", gen_flags.outlier_mode, "sphere or on-surface")
      ->capture_default_str();
  gen->add_option("--seed", gen_flags.seed, "Seed")->capture_default_str();
  gen->add_option("--model", gen_flags.model, "Model point file");
  gen->add_option("--output", gen_flags.output, "Correspondence file (default stdout)");
  gen->add_option("--ground-truth", gen_flags.ground_truth,
                  "Where to write the ground-truth sidecar");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*reg) {
      return cmd_register(reg_input, reg_flags, reg_gt, reg_output, !reg_no_timing,
                          out);
    }
    if (*bench) return cmd_bench(bench_flags, out, err);
    if (*inspect) return cmd_vote_inspect(inspect_flags, out, err);
    if (*gen) return cmd_generate(gen_flags, out);
  } catch (const Error& e) {
    err << json{{"error", error_name(e.code())}, {"message", e.what()}}.dump()
        << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << json{{"error", "IoError"}, {"message", e.what()}}.dump() << '\n';
    return kExitIo;
  }
  return kExitParse;
}

}  // namespace vocra::cli
