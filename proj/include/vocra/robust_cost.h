#pragma once

#include <optional>
#include <string_view>

namespace vocra {

// Controlling parameter mu and inlier threshold xi of the Tukey's Biweight
// surrogate family. mu -> infinity is the convex end, mu = 1 recovers TB.
struct GncParams {
  double mu = 1.0;
  double xi = 1.0;

  // Throws Error(kInvalidArgument) unless mu > 0 and xi > 0.
  void validate() const;
};

// Surrogate TB cost, evaluated as written:
//   r^2/(mu xi^2) - r^4/(mu xi^4) + r^6/(3 mu xi^6)  if r^2 <= mu xi^2
//   1/3                                              otherwise
// The two branches meet only for mu = 1.
double tb_surrogate_cost(double r, const GncParams& params);

// Outlier process mu xi^2 (1/3 - w + 2/3 w^{3/2}).
double tb_outlier_process(double omega, const GncParams& params);

// Closed-form GNC-TB weight (1 - r^2/(mu xi^2))^2, truncated to 0.
double tb_weight(double r, const GncParams& params);

// Per-residual joint objective in units of mu xi^2:
//   w r^2/(mu xi^2) + (1/3 - w + 2/3 w^{3/2}).
// Its derivative in w is tb_stationarity_residual and its minimizer over
// [0, 1] is tb_weight.
double tb_objective(double r, double omega, const GncParams& params);

// d tb_objective / d omega = r^2/(mu xi^2) - 1 + sqrt(omega).
double tb_stationarity_residual(double r, double omega,
                                const GncParams& params);

enum class KernelKind {
  kZeroOne,
  kTukeyBiweight,
  kGemanMcClure,
  kCauchy,
  kLeclerc,
  kTruncatedLS,
};

std::string_view kernel_name(KernelKind kind);
// Accepts the CLI spellings: zeroone, tb, gm, cauchy, leclerc, tls.
std::optional<KernelKind> parse_kernel_kind(std::string_view name);

struct VoteKernel {
  KernelKind kind = KernelKind::kTukeyBiweight;
  GncParams params{1.5, 1.0};

  // Largest scale gap that still earns a vote: 2 xi for ZeroOne,
  // 2 xi sqrt(mu) otherwise.
  double support() const;
};

// Vote earned by both members of a pair with scale gap s. In [0, 1]; 1 at
// s = 0; 0 beyond support().
double vote_increment(double s, const VoteKernel& kernel);

}  // namespace vocra
