#include "vocra/robust_cost.h"

#include <cmath>

#include "vocra/error.h"

namespace vocra {

void GncParams::validate() const {
  if (!(mu > 0.0) || !(xi > 0.0) || !std::isfinite(mu) || !std::isfinite(xi)) {
    throw Error(ErrorCode::kInvalidArgument, "GNC parameters must be positive");
  }
}

double tb_surrogate_cost(double r, const GncParams& params) {
  const double r2 = r * r;
  const double xi2 = params.xi * params.xi;
  const double mu = params.mu;
  if (r2 > mu * xi2) return 1.0 / 3.0;
  const double xi4 = xi2 * xi2;
  const double xi6 = xi4 * xi2;
  return r2 / (mu * xi2) - r2 * r2 / (mu * xi4) + r2 * r2 * r2 / (3.0 * mu * xi6);
}

double tb_outlier_process(double omega, const GncParams& params) {
  const double scale = params.mu * params.xi * params.xi;
  return scale * (1.0 / 3.0 - omega + 2.0 / 3.0 * omega * std::sqrt(omega));
}

double tb_weight(double r, const GncParams& params) {
  const double a = r * r / (params.mu * params.xi * params.xi);
  if (a >= 1.0) return 0.0;
  const double b = 1.0 - a;
  return b * b;
}

double tb_objective(double r, double omega, const GncParams& params) {
  const double a = r * r / (params.mu * params.xi * params.xi);
  return omega * a + 1.0 / 3.0 - omega + 2.0 / 3.0 * omega * std::sqrt(omega);
}

double tb_stationarity_residual(double r, double omega,
                                const GncParams& params) {
  return r * r / (params.mu * params.xi * params.xi) - 1.0 + std::sqrt(omega);
}

std::string_view kernel_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::kZeroOne: return "zeroone";
    case KernelKind::kTukeyBiweight: return "tb";
    case KernelKind::kGemanMcClure: return "gm";
    case KernelKind::kCauchy: return "cauchy";
    case KernelKind::kLeclerc: return "leclerc";
    case KernelKind::kTruncatedLS: return "tls";
  }
  return "unknown";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view name) {
  for (KernelKind k :
       {KernelKind::kZeroOne, KernelKind::kTukeyBiweight,
        KernelKind::kGemanMcClure, KernelKind::kCauchy, KernelKind::kLeclerc,
        KernelKind::kTruncatedLS}) {
    if (kernel_name(k) == name) return k;
  }
  return std::nullopt;
}

double VoteKernel::support() const {
  if (kind == KernelKind::kZeroOne) return 2.0 * params.xi;
  return 2.0 * params.xi * std::sqrt(params.mu);
}

double vote_increment(double s, const VoteKernel& kernel) {
  const double xi = kernel.params.xi;
  if (kernel.kind == KernelKind::kZeroOne) {
    return s <= 2.0 * xi ? 1.0 : 0.0;
  }
  // Shared support c = 2 xi sqrt(mu); the boundary itself votes 0.
  const double c2 = 4.0 * kernel.params.mu * xi * xi;
  const double x2 = s * s / c2;
  if (x2 >= 1.0) return 0.0;
  switch (kernel.kind) {
    case KernelKind::kTukeyBiweight: {
      const double b = 1.0 - x2;
      return b * b;
    }
    case KernelKind::kGemanMcClure: {
      const double b = 1.0 + x2;
      return 1.0 / (b * b);
    }
    case KernelKind::kCauchy:
      return 1.0 / (1.0 + x2);
    case KernelKind::kLeclerc:
      return std::exp(-x2);
    case KernelKind::kTruncatedLS:
      return 1.0;
    case KernelKind::kZeroOne:
      break;
  }
  return 0.0;
}

}  // namespace vocra
