// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/scanpath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamgrid/errors.hpp"

namespace beamgrid {

namespace {

// inclusive sample coordinates lo, lo + pitch, ..., up to hi
std::vector<double> axis_samples(double lo, double hi, double pitch, const char* axis) {
  if (!(pitch > 0.0)) throw ConfigError(std::string("pitch must be positive on axis ") + axis);
  const double span = hi - lo;
  if (span < 0.0) throw ConfigError(std::string("extent inverted on axis ") + axis);
  if (span == 0.0) return {lo};
  if (pitch > span)
    throw ConfigError(std::string("pitch larger than extent on axis ") + axis);
  const auto steps = static_cast<std::size_t>(std::floor(span / pitch + 1e-9));
  std::vector<double> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out.push_back(lo + pitch * static_cast<double>(i));
  return out;
}

// serpentine over one plane; returns points in traversal order
void append_plane(std::vector<Position>& points, const std::vector<double>& fine,
                  const std::vector<double>& coarse, Plane plane, double fixed,
                  bool reverse_plane) {
  const std::size_t begin = points.size();
  for (std::size_t li = 0; li < coarse.size(); ++li) {
    const bool rev = (li % 2 == 1);
    for (std::size_t fi = 0; fi < fine.size(); ++fi) {
      const double u = fine[rev ? fine.size() - 1 - fi : fi];
      const double v = coarse[li];
      if (plane == Plane::xz)
        points.push_back({u, fixed, v});
      else
        points.push_back({u, v, fixed});
    }
  }
  if (reverse_plane) std::reverse(points.begin() + static_cast<long>(begin), points.end());
}

}  // namespace

ScanPath meander_path(const Box& extent, Plane plane, double fine_pitch_m,
                      double coarse_pitch_m) {
  ScanPath path;
  path.plane = plane;
  path.fine_pitch_m = fine_pitch_m;
  path.coarse_pitch_m = coarse_pitch_m;

  const std::vector<double> xs = axis_samples(extent.lo.x, extent.hi.x, fine_pitch_m, "x");
  switch (plane) {
    case Plane::xy: {
      const std::vector<double> ys = axis_samples(extent.lo.y, extent.hi.y, coarse_pitch_m, "y");
      append_plane(path.points, xs, ys, Plane::xy, extent.lo.z, false);
      break;
    }
    case Plane::xz: {
      const std::vector<double> zs = axis_samples(extent.lo.z, extent.hi.z, coarse_pitch_m, "z");
      append_plane(path.points, xs, zs, Plane::xz, extent.lo.y, false);
      break;
    }
    case Plane::volume: {
      const std::vector<double> ys = axis_samples(extent.lo.y, extent.hi.y, coarse_pitch_m, "y");
      const std::vector<double> zs = axis_samples(extent.lo.z, extent.hi.z, coarse_pitch_m, "z");
      for (std::size_t zi = 0; zi < zs.size(); ++zi)
        append_plane(path.points, xs, ys, Plane::xy, zs[zi], zi % 2 == 1);
      break;
    }
  }
  return path;
}

std::vector<std::pair<std::size_t, std::size_t>> scan_lines(const ScanPath& path) {
  std::vector<std::pair<std::size_t, std::size_t>> lines;
  const auto& pts = path.points;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= pts.size(); ++i) {
    const bool brk = i == pts.size() || pts[i].y != pts[begin].y || pts[i].z != pts[begin].z;
    if (brk) {
      lines.emplace_back(begin, i);
      begin = i;
    }
  }
  return lines;
}

SamplingReport validate_sampling(const ScanPath& path, const FrequencyPlan& plan) {
  if (path.points.empty()) throw ConfigError("empty scan path");
  SamplingReport report;

  for (std::size_t i = 1; i < path.points.size(); ++i)
    report.max_adjacent_spacing_m =
        std::max(report.max_adjacent_spacing_m, distance(path.points[i - 1], path.points[i]));

  // nearest-point spacing between adjacent lines, both directions
  const auto lines = scan_lines(path);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto [a0, a1] = lines[li - 1];
    const auto [b0, b1] = lines[li];
    for (std::size_t i = a0; i < a1; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = b0; j < b1; ++j)
        nearest = std::min(nearest, distance(path.points[i], path.points[j]));
      report.max_adjacent_spacing_m = std::max(report.max_adjacent_spacing_m, nearest);
    }
  }

  report.nyquist_ok = report.max_adjacent_spacing_m < plan.wavelength_m() / 2.0;
  return report;
}

double path_length(const ScanPath& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.points.size(); ++i)
    total += distance(path.points[i - 1], path.points[i]);
  return total;
}

std::size_t nearest_point_index(const ScanPath& path, const Position& p) {
  if (path.points.empty()) throw ConfigError("nearest_point_index: empty scan path");
  std::size_t best = 0;
  double best_d = distance(path.points[0], p);
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const double d = distance(path.points[i], p);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

}  // namespace beamgrid
