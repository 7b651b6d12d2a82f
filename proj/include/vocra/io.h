#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vocra/geometry.h"

namespace vocra {

// Shortest round-trip decimal representation; "nan"/"inf" for non-finite.
std::string format_double(double value);

// Correspondence files: one "px py pz qx qy qz" line per correspondence,
// '#' starts a comment line, blank lines are skipped.
//
// Throws Error(kParseError) naming the 1-based line on malformed input.
CorrespondenceSet read_correspondences(std::istream& in, double sigma);
CorrespondenceSet read_correspondences(const std::filesystem::path& path,
                                       double sigma);

void write_correspondences(std::ostream& out, const CorrespondenceSet& pairs);

// Plain point clouds: "x y z" per line with the same comment rules.
std::vector<Vec3> read_points(const std::filesystem::path& path);

struct GroundTruth {
  RigidTransform transform;
  std::vector<Index> inliers;
};

// JSON sidecar: {"rotation": [9 floats, row-major], "translation": [3],
// "inliers": [...]}.
GroundTruth read_ground_truth(const std::filesystem::path& path);
void write_ground_truth(std::ostream& out, const GroundTruth& gt);

}  // namespace vocra
