#include "vocra/io.h"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

namespace vocra {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

// Splits a line into exactly `count` finite doubles. Returns false when the
// token count differs or a token is not a number.
template <std::size_t N>
bool parse_numbers(std::string_view line, std::array<double, N>* out) {
  std::size_t filled = 0;
  std::size_t pos = 0;
  while (true) {
    while (pos < line.size() && is_space(line[pos])) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && !is_space(line[end])) ++end;
    if (filled == N) return false;
    const char* first = line.data() + pos;
    const char* last = line.data() + end;
    if (*first == '+') ++first;
    double value = 0.0;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(value)) {
      return false;
    }
    (*out)[filled++] = value;
    pos = end;
  }
  return filled == N;
}

bool skip_line(std::string_view line) {
  std::size_t pos = 0;
  while (pos < line.size() && is_space(line[pos])) ++pos;
  return pos == line.size() || line[pos] == '#';
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  }
  return in;
}

}  // namespace

CorrespondenceSet read_correspondences(std::istream& in, double sigma) {
  std::vector<Vec3> p;
  std::vector<Vec3> q;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::array<double, 6> v{};
    if (!parse_numbers(line, &v)) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) +
                      ": expected 6 numbers 'px py pz qx qy qz'");
    }
    p.emplace_back(v[0], v[1], v[2]);
    q.emplace_back(v[3], v[4], v[5]);
  }
  return CorrespondenceSet(std::move(p), std::move(q), sigma);
}

CorrespondenceSet read_correspondences(const std::filesystem::path& path,
                                       double sigma) {
  std::ifstream in = open_input(path);
  return read_correspondences(in, sigma);
}

void write_correspondences(std::ostream& out, const CorrespondenceSet& pairs) {
  out << "# px py pz qx qy qz\n";
  for (Index i = 0; i < pairs.size(); ++i) {
    const Vec3& p = pairs.p(i);
    const Vec3& q = pairs.q(i);
    out << format_double(p.x()) << ' ' << format_double(p.y()) << ' '
        << format_double(p.z()) << ' ' << format_double(q.x()) << ' '
        << format_double(q.y()) << ' ' << format_double(q.z()) << '\n';
  }
}

std::vector<Vec3> read_points(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Vec3> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::array<double, 3> v{};
    if (!parse_numbers(line, &v)) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": expected 'x y z'");
    }
    points.emplace_back(v[0], v[1], v[2]);
  }
  return points;
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  GroundTruth gt;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    const auto rot = j.at("rotation").get<std::vector<double>>();
    const auto trans = j.at("translation").get<std::vector<double>>();
    if (rot.size() != 9 || trans.size() != 3) {
      throw Error(ErrorCode::kParseError,
                  path.string() + ": rotation needs 9 and translation 3 values");
    }
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m(r, c) = rot[3 * r + c];
    }
    gt.transform.rotation = RotationMatrix::from_matrix(m);
    gt.transform.translation = Vec3(trans[0], trans[1], trans[2]);
    if (j.contains("inliers")) {
      gt.inliers = j.at("inliers").get<std::vector<Index>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kParseError) throw;
    throw Error(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  return gt;
}

void write_ground_truth(std::ostream& out, const GroundTruth& gt) {
  nlohmann::json j;
  std::vector<double> rot;
  const Mat3& m = gt.transform.rotation.matrix();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(m(r, c));
  }
  const Vec3& t = gt.transform.translation;
  j["rotation"] = rot;
  j["translation"] = {t.x(), t.y(), t.z()};
  j["inliers"] = gt.inliers;
  out << j.dump(2) << '\n';
}

}  // namespace vocra
