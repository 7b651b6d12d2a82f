#include "vocra/rotation_averaging.h"

#include <algorithm>
#include <cmath>

namespace vocra {

namespace {

Mat3 elementwise_median(std::span<const RotationSample> rotations) {
  const std::size_t m = rotations.size();
  std::vector<double> column(m);
  Mat3 median;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < m; ++i) {
        column[i] = rotations[i].rotation.matrix()(r, c);
      }
      const std::size_t mid = m / 2;
      std::nth_element(column.begin(), column.begin() + mid, column.end());
      double value = column[mid];
      if (m % 2 == 0) {
        const double lower =
            *std::max_element(column.begin(), column.begin() + mid);
        value = 0.5 * (value + lower);
      }
      median(r, c) = value;
    }
  }
  return median;
}

}  // namespace

RotationMatrix robust_lee_chordal(std::span<const RotationSample> rotations,
                                  const ChordalAveragingOptions& options) {
  if (rotations.empty()) {
    throw Error(ErrorCode::kEmptyInput, "no rotations to average");
  }
  if (rotations.size() == 1) return rotations.front().rotation;

  RotationMatrix estimate;
  try {
    estimate = project_to_so3(elementwise_median(rotations));
  } catch (const Error&) {
    estimate = rotations.front().rotation;
  }

  for (int it = 0; it < options.max_iterations; ++it) {
    Mat3 weighted_sum = Mat3::Zero();
    Mat3 unit_pull = Mat3::Zero();
    double coincident = 0.0;
    for (const RotationSample& s : rotations) {
      const Mat3 diff = s.rotation.matrix() - estimate.matrix();
      const double d = diff.norm();
      if (d < options.distance_floor) {
        coincident += 1.0;
      } else {
        unit_pull += diff / d;
      }
      weighted_sum += s.rotation.matrix() / std::max(d, options.distance_floor);
    }
    // Subgradient of the L1 objective contains zero: estimate is optimal.
    if (unit_pull.norm() <= coincident) break;

    const RotationMatrix next = project_to_so3(weighted_sum);
    const double step = geodesic_distance(estimate, next);
    estimate = next;
    if (step < options.step_tolerance) break;
  }
  return estimate;
}

std::vector<Index> chordal_consensus(std::span<const RotationSample> rotations,
                                     const RotationMatrix& center,
                                     double theta) {
  std::vector<Index> members;
  for (const RotationSample& s : rotations) {
    if (chordal_distance(s.rotation, center) < theta) {
      members.push_back(s.source_index);
    }
  }
  return members;
}

double chordal_threshold_from_geodesic(double theta_geo) {
  return 2.0 * std::sqrt(2.0) * std::sin(theta_geo / 2.0);
}

}  // namespace vocra
