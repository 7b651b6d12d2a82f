#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vocra/error.h"

namespace vocra {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Index = std::size_t;

// Deterministic random source used throughout the library and benchmark.
using Rng = std::mt19937_64;

namespace tolerance {
// Orthonormality / determinant check for RotationMatrix.
inline constexpr double kRotation = 1e-9;
// Relative collinearity threshold for triads.
inline constexpr double kTriadDegeneracy = 1e-12;
// Relative rank threshold for the weighted p-scatter.
inline constexpr double kRankDeficiency = 1e-12;
// Absolute singular-value floor for projection onto SO(3).
inline constexpr double kSingular = 1e-12;
}  // namespace tolerance

// An element of SO(3).
class RotationMatrix {
 public:
  RotationMatrix() : m_(Mat3::Identity()) {}

  // Throws Error(kInvalidArgument) if m is not orthonormal with det +1.
  static RotationMatrix from_matrix(const Mat3& m);
  // For matrices already known to be rotations (e.g. SVD products).
  static RotationMatrix from_matrix_unchecked(const Mat3& m) {
    return RotationMatrix(m);
  }

  static RotationMatrix identity() { return RotationMatrix(); }
  // Right-handed rotation by `angle` radians about `axis` (need not be unit).
  static RotationMatrix about_axis(const Vec3& axis, double angle);
  // Exponential map Exp([w]x).
  static RotationMatrix exp(const Vec3& w);

  static bool is_rotation(const Mat3& m, double tol = tolerance::kRotation);

  const Mat3& matrix() const { return m_; }
  RotationMatrix transpose() const { return RotationMatrix(m_.transpose()); }
  RotationMatrix inverse() const { return transpose(); }

  RotationMatrix operator*(const RotationMatrix& o) const {
    return RotationMatrix(m_ * o.m_);
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  bool operator==(const RotationMatrix& o) const { return m_ == o.m_; }

 private:
  explicit RotationMatrix(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

struct RigidTransform {
  RotationMatrix rotation;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  RigidTransform inverse() const {
    RotationMatrix rt = rotation.inverse();
    return {rt, -(rt * translation)};
  }
  // (this * o).apply(p) == this->apply(o.apply(p))
  RigidTransform operator*(const RigidTransform& o) const {
    return {rotation * o.rotation, rotation * o.translation + translation};
  }
};

// Putative correspondences p_i <-> q_i with isotropic noise level sigma.
class CorrespondenceSet {
 public:
  CorrespondenceSet() = default;
  // Throws Error(kInvalidArgument) on size mismatch, non-finite points or
  // sigma <= 0.
  CorrespondenceSet(std::vector<Vec3> p, std::vector<Vec3> q, double sigma);

  std::size_t size() const { return p_.size(); }
  bool empty() const { return p_.empty(); }
  const Vec3& p(Index i) const { return p_[i]; }
  const Vec3& q(Index i) const { return q_[i]; }
  std::span<const Vec3> points_p() const { return p_; }
  std::span<const Vec3> points_q() const { return q_; }
  double sigma() const { return sigma_; }

  // Subset in the given index order, same sigma.
  CorrespondenceSet subset(std::span<const Index> indices) const;

 private:
  std::vector<Vec3> p_;
  std::vector<Vec3> q_;
  double sigma_ = 1.0;
};

// Angle of the relative rotation, in [0, pi].
double geodesic_distance(const RotationMatrix& a, const RotationMatrix& b);

// Frobenius norm of a - b; equals 2*sqrt(2)*sin(geodesic/2).
double chordal_distance(const RotationMatrix& a, const RotationMatrix& b);

/// Closed-form rotation from three point pairs.
///
/// Each triple spans an orthonormal frame: x along (p2 - p1), z along
/// x cross (p3 - p1), y = z cross x. The result maps the p-frame onto the
/// q-frame. Exact on noiseless rigidly related triples.
///
/// Throws Error(kDegenerateTriad) if either triple is collinear.
RotationMatrix horn_triad_rotation(const Vec3& p1, const Vec3& p2,
                                   const Vec3& p3, const Vec3& q1,
                                   const Vec3& q2, const Vec3& q3);

// Non-throwing variant; std::nullopt for a degenerate triple.
std::optional<RotationMatrix> try_horn_triad_rotation(const Vec3& p1,
                                                      const Vec3& p2,
                                                      const Vec3& p3,
                                                      const Vec3& q1,
                                                      const Vec3& q2,
                                                      const Vec3& q3);

// Weighted centroid sum(w_i x_i) / sum(w_i) over the given points.
Vec3 weighted_centroid(std::span<const Vec3> points,
                       std::span<const double> weights);

/// Minimizer over SO(3) of sum_i w_i |R (p_i - p_bar) - (q_i - q_bar)|^2
/// with weighted centroids p_bar, q_bar (Kabsch/Arun with determinant
/// correction). Weights must be non-negative with positive sum; scaling all
/// weights by a positive constant does not change the result.
///
/// Throws Error(kRankDeficient) when the weighted p-scatter has rank < 2 and
/// Error(kInvalidArgument) on malformed weights.
RotationMatrix weighted_svd_rotation(const CorrespondenceSet& pairs,
                                     std::span<const double> weights);

// Nearest rotation in Frobenius norm. Throws Error(kSingularInput) when all
// singular values vanish.
RotationMatrix project_to_so3(const Mat3& m);

// Haar-uniform rotation from a normalized Gaussian quaternion.
RotationMatrix random_rotation(Rng& rng);

// Uniform point in the ball of the given radius centered at the origin.
Vec3 random_in_ball(Rng& rng, double radius);

}  // namespace vocra
