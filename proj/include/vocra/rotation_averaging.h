#pragma once

#include <span>
#include <vector>

#include "vocra/geometry.h"

namespace vocra {

struct RotationSample {
  RotationMatrix rotation;
  // Index of the correspondence that produced this sample.
  Index source_index = 0;
};

struct ChordalAveragingOptions {
  int max_iterations = 10;
  // Stop once an update moves the estimate by less than this (radians).
  double step_tolerance = 1e-6;
  // Lower bound on per-sample distances inside the Weiszfeld weights.
  double distance_floor = 1e-5;
};

/// Robust chordal L1 average of rotations.
///
/// Approximates argmin_R sum_i |R_i - R|_F over SO(3) with a projected
/// Weiszfeld iteration seeded at the projected elementwise median. Iterates
/// stop early when the subgradient optimality condition holds at the
/// current estimate, which makes a strict majority of identical samples an
/// exact fixed point.
///
/// Throws Error(kEmptyInput) for an empty list.
RotationMatrix robust_lee_chordal(std::span<const RotationSample> rotations,
                                  const ChordalAveragingOptions& options = {});

// Source indices of samples strictly within chordal distance `theta` of
// `center`, in input order.
std::vector<Index> chordal_consensus(std::span<const RotationSample> rotations,
                                     const RotationMatrix& center,
                                     double theta);

// 2 sqrt(2) sin(theta_geo / 2).
double chordal_threshold_from_geodesic(double theta_geo);

}  // namespace vocra
