#include "vocra/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace vocra {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateTriad: return "DegenerateTriad";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kSingularInput: return "SingularInput";
    case ErrorCode::kInsufficientCorrespondences:
      return "InsufficientCorrespondences";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNoConsensus: return "NoConsensus";
    case ErrorCode::kDegenerateCandidate: return "DegenerateCandidate";
    case ErrorCode::kEmptyInlierSet: return "EmptyInlierSet";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return s;
}

// Orthonormal column frame [x y z] spanned by a non-degenerate triple.
bool triad_frame(const Vec3& a, const Vec3& b, const Vec3& c, Mat3* frame) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 n = e1.cross(e2);
  const double n_norm = n.norm();
  if (!(n_norm > tolerance::kTriadDegeneracy * e1.norm() * e2.norm())) {
    return false;
  }
  const Vec3 x = e1.normalized();
  const Vec3 z = n / n_norm;
  const Vec3 y = z.cross(x);
  frame->col(0) = x;
  frame->col(1) = y;
  frame->col(2) = z;
  return true;
}

}  // namespace

RotationMatrix RotationMatrix::from_matrix(const Mat3& m) {
  if (!is_rotation(m)) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not in SO(3)");
  }
  return RotationMatrix(m);
}

bool RotationMatrix::is_rotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  const Mat3 gram = m.transpose() * m;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

RotationMatrix RotationMatrix::about_axis(const Vec3& axis, double angle) {
  return RotationMatrix(
      Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
}

RotationMatrix RotationMatrix::exp(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 k = skew(w);
  if (theta < 1e-8) {
    // Second-order series; exact to double precision at this size.
    return RotationMatrix(Mat3::Identity() + k + 0.5 * k * k);
  }
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return RotationMatrix(Mat3::Identity() + a * k + b * k * k);
}

CorrespondenceSet::CorrespondenceSet(std::vector<Vec3> p, std::vector<Vec3> q,
                                     double sigma)
    : p_(std::move(p)), q_(std::move(q)), sigma_(sigma) {
  if (p_.size() != q_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "point lists differ in length (" + std::to_string(p_.size()) +
                    " vs " + std::to_string(q_.size()) + ")");
  }
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma must be positive");
  }
  for (std::size_t i = 0; i < p_.size(); ++i) {
    if (!p_[i].allFinite() || !q_[i].allFinite()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "non-finite point at index " + std::to_string(i));
    }
  }
}

CorrespondenceSet CorrespondenceSet::subset(
    std::span<const Index> indices) const {
  std::vector<Vec3> p;
  std::vector<Vec3> q;
  p.reserve(indices.size());
  q.reserve(indices.size());
  for (Index i : indices) {
    p.push_back(p_.at(i));
    q.push_back(q_.at(i));
  }
  CorrespondenceSet out;
  out.p_ = std::move(p);
  out.q_ = std::move(q);
  out.sigma_ = sigma_;
  return out;
}

double geodesic_distance(const RotationMatrix& a, const RotationMatrix& b) {
  const Mat3 rel = a.matrix().transpose() * b.matrix();
  // cos from the trace, sin from the skew part. Same angle as the clamped
  // arccos of the trace but without its loss of precision near 0.
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  const Vec3 v(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0),
               rel(1, 0) - rel(0, 1));
  const double s = std::min(0.5 * v.norm(), 1.0);
  return std::abs(std::atan2(s, c));
}

double chordal_distance(const RotationMatrix& a, const RotationMatrix& b) {
  return (a.matrix() - b.matrix()).norm();
}

std::optional<RotationMatrix> try_horn_triad_rotation(const Vec3& p1,
                                                      const Vec3& p2,
                                                      const Vec3& p3,
                                                      const Vec3& q1,
                                                      const Vec3& q2,
                                                      const Vec3& q3) {
  Mat3 tp;
  Mat3 tq;
  if (!triad_frame(p1, p2, p3, &tp) || !triad_frame(q1, q2, q3, &tq)) {
    return std::nullopt;
  }
  return RotationMatrix::from_matrix_unchecked(tq * tp.transpose());
}

RotationMatrix horn_triad_rotation(const Vec3& p1, const Vec3& p2,
                                   const Vec3& p3, const Vec3& q1,
                                   const Vec3& q2, const Vec3& q3) {
  auto r = try_horn_triad_rotation(p1, p2, p3, q1, q2, q3);
  if (!r) throw Error(ErrorCode::kDegenerateTriad, "collinear point triple");
  return *r;
}

Vec3 weighted_centroid(std::span<const Vec3> points,
                       std::span<const double> weights) {
  Vec3 sum = Vec3::Zero();
  double wsum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += weights[i] * points[i];
    wsum += weights[i];
  }
  return sum / wsum;
}

RotationMatrix weighted_svd_rotation(const CorrespondenceSet& pairs,
                                     std::span<const double> weights) {
  const std::size_t n = pairs.size();
  if (weights.size() != n) {
    throw Error(ErrorCode::kInvalidArgument, "weight count mismatch");
  }
  if (n < 3) {
    throw Error(ErrorCode::kRankDeficient, "fewer than 3 pairs");
  }
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, "weights must be >= 0");
    }
    wsum += w;
  }
  if (!(wsum > 0.0)) {
    throw Error(ErrorCode::kRankDeficient, "weights sum to zero");
  }

  const Vec3 p_bar = weighted_centroid(pairs.points_p(), weights);
  const Vec3 q_bar = weighted_centroid(pairs.points_q(), weights);

  Mat3 h = Mat3::Zero();
  Mat3 scatter = Mat3::Zero();
  double second_moment = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights[i];
    if (w == 0.0) continue;
    const Vec3 dp = pairs.p(i) - p_bar;
    const Vec3 dq = pairs.q(i) - q_bar;
    h.noalias() += w * dp * dq.transpose();
    scatter.noalias() += w * dp * dp.transpose();
    second_moment += w * pairs.p(i).squaredNorm();
  }
  scatter /= wsum;
  second_moment /= wsum;

  // Eigenvalues in increasing order; rank >= 2 needs the middle one.
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(scatter,
                                                Eigen::EigenvaluesOnly);
  const double lambda_max = eig.eigenvalues()(2);
  const double lambda_mid = eig.eigenvalues()(1);
  const double scale = std::max(lambda_max, second_moment);
  if (!(lambda_mid > tolerance::kRankDeficiency * scale)) {
    throw Error(ErrorCode::kRankDeficient,
                "weighted p-point scatter has rank < 2");
  }

  const Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return RotationMatrix::from_matrix_unchecked(v * d * u.transpose());
}

RotationMatrix project_to_so3(const Mat3& m) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kSingularInput, "non-finite matrix");
  }
  const Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(0) < tolerance::kSingular) {
    throw Error(ErrorCode::kSingularInput, "all singular values vanish");
  }
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return RotationMatrix::from_matrix_unchecked(u * d * v.transpose());
}

RotationMatrix random_rotation(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  } while (q.norm() < 1e-12);
  q.normalize();
  return RotationMatrix::from_matrix_unchecked(q.toRotationMatrix());
}

Vec3 random_in_ball(Rng& rng, double radius) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(unit(rng), unit(rng), unit(rng));
  } while (v.squaredNorm() > 1.0);
  return radius * v;
}

}  // namespace vocra
