// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "beamgrid/errors.hpp"
#include "beamgrid/rng.hpp"
#include "beamgrid/scanpath.hpp"

namespace beamgrid {

double distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool position_finite(const Position& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double Box::span(int axis) const {
  switch (axis) {
    case 0: return hi.x - lo.x;
    case 1: return hi.y - lo.y;
    case 2: return hi.z - lo.z;
    default: throw ConfigError("box axis out of range");
  }
}

bool Box::contains(const Position& p, double tol) const {
  return p.x >= lo.x - tol && p.x <= hi.x + tol && p.y >= lo.y - tol &&
         p.y <= hi.y + tol && p.z >= lo.z - tol && p.z <= hi.z + tol;
}

Position Box::center() const {
  return {(lo.x + hi.x) / 2.0, (lo.y + hi.y) / 2.0, (lo.z + hi.z) / 2.0};
}

void FrequencyPlan::validate() const {
  if (!(carrier_frequency_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (num_subcarriers == 0) throw ConfigError("num_subcarriers must be positive");
  if (!(used_fraction > 0.0) || used_fraction > 1.0)
    throw ConfigError("used_fraction must be in (0, 1]");
  // every subcarrier frequency must stay positive
  if (frequency_hz(0) <= 0.0) throw ConfigError("subcarrier frequencies must be positive");
}

double FrequencyPlan::subcarrier_spacing_hz() const {
  return bandwidth_hz / static_cast<double>(num_subcarriers);
}

double FrequencyPlan::subcarrier_offset_hz(std::size_t index) const {
  if (index >= num_subcarriers) throw ConfigError("subcarrier index out of range");
  const double k = static_cast<double>(index);
  const double half = static_cast<double>(num_subcarriers) / 2.0;
  return (k - half) * subcarrier_spacing_hz();
}

double FrequencyPlan::frequency_hz(std::size_t index) const {
  return carrier_frequency_hz + subcarrier_offset_hz(index);
}

double FrequencyPlan::wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

double FrequencyPlan::wavelength_m(std::size_t index) const {
  return kSpeedOfLight / frequency_hz(index);
}

GeometryKind geometry_kind_from_string(const std::string& s) {
  if (s == "line_x") return GeometryKind::line_x;
  if (s == "line_y") return GeometryKind::line_y;
  if (s == "square") return GeometryKind::square;
  if (s == "cross") return GeometryKind::cross;
  if (s == "circle") return GeometryKind::circle;
  if (s == "random") return GeometryKind::random;
  if (s == "explicit") return GeometryKind::explicit_list;
  throw ConfigError("unknown geometry kind: " + s);
}

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::line_x: return "line_x";
    case GeometryKind::line_y: return "line_y";
    case GeometryKind::square: return "square";
    case GeometryKind::cross: return "cross";
    case GeometryKind::circle: return "circle";
    case GeometryKind::random: return "random";
    case GeometryKind::explicit_list: return "explicit";
  }
  throw ConfigError("invalid geometry kind value");
}

Plane plane_from_string(const std::string& s) {
  if (s == "xy") return Plane::xy;
  if (s == "xz") return Plane::xz;
  if (s == "volume") return Plane::volume;
  throw ConfigError("unknown plane: " + s);
}

std::string to_string(Plane plane) {
  switch (plane) {
    case Plane::xy: return "xy";
    case Plane::xz: return "xz";
    case Plane::volume: return "volume";
  }
  throw ConfigError("invalid plane value");
}

double aperture_to_spacing(double aperture_m2) {
  if (!(aperture_m2 > 0.0)) throw ConfigError("aperture must be positive");
  return std::sqrt(aperture_m2) / 2.0;
}

double spacing_to_aperture(double spacing_m) {
  if (!(spacing_m > 0.0)) throw ConfigError("spacing must be positive");
  return (2.0 * spacing_m) * (2.0 * spacing_m);
}

namespace {

// u ranges over the in-plane horizontal axis, v over the second plane axis
Position plane_point(const Position& center, Plane plane, double u, double v) {
  if (plane == Plane::xz) return {center.x + u, center.y, center.z + v};
  return {center.x + u, center.y + v, center.z};
}

std::size_t isqrt_exact(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (r * r != n) return 0;
  return r;
}

}  // namespace

AntennaArray make_array(GeometryKind kind, std::size_t count, double aperture_m2,
                        const Position& center, Plane plane) {
  if (plane == Plane::volume) throw ConfigError("array plane must be xy or xz");
  if (count == 0) throw ConfigError("array needs at least one element");
  if (kind == GeometryKind::random || kind == GeometryKind::explicit_list)
    throw ConfigError("make_array handles deterministic kinds only");

  AntennaArray array;
  array.kind = kind;
  if (count == 1) {  // degenerate for every kind
    array.elements.push_back(center);
    return array;
  }
  if (!(aperture_m2 > 0.0)) throw ConfigError("zero aperture with more than one element");

  const double side = std::sqrt(aperture_m2);
  const double half = side / 2.0;

  switch (kind) {
    case GeometryKind::line_x:
    case GeometryKind::line_y: {
      const double step = side / static_cast<double>(count - 1);
      for (std::size_t i = 0; i < count; ++i) {
        const double t = -half + step * static_cast<double>(i);
        array.elements.push_back(kind == GeometryKind::line_x
                                     ? plane_point(center, plane, t, 0.0)
                                     : plane_point(center, plane, 0.0, t));
      }
      array.min_spacing_m = step;
      break;
    }
    case GeometryKind::square: {
      const std::size_t k = isqrt_exact(count);
      if (k == 0) throw ConfigError("square geometry needs a perfect-square element count");
      const double step = side / static_cast<double>(k - 1);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          array.elements.push_back(plane_point(center, plane,
                                               -half + step * static_cast<double>(j),
                                               -half + step * static_cast<double>(i)));
      array.min_spacing_m = step;
      break;
    }
    case GeometryKind::cross: {
      if (count % 4 != 1) throw ConfigError("cross geometry needs count = 4a + 1");
      const std::size_t per_arm_line = (count - 1) / 2 + 1;  // elements on each full line
      const double step = side / static_cast<double>(per_arm_line - 1);
      for (std::size_t i = 0; i < per_arm_line; ++i)
        array.elements.push_back(
            plane_point(center, plane, -half + step * static_cast<double>(i), 0.0));
      for (std::size_t i = 0; i < per_arm_line; ++i) {
        const double t = -half + step * static_cast<double>(i);
        if (t == 0.0) continue;  // shared center element
        array.elements.push_back(plane_point(center, plane, 0.0, t));
      }
      array.min_spacing_m = step;
      break;
    }
    case GeometryKind::circle: {
      if (count < 3) throw ConfigError("circle geometry needs at least 3 elements");
      for (std::size_t i = 0; i < count; ++i) {
        const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(count);
        array.elements.push_back(plane_point(center, plane, half * std::cos(a),
                                             half * std::sin(a)));
      }
      array.min_spacing_m = 2.0 * half * std::sin(M_PI / static_cast<double>(count));
      break;
    }
    default:
      throw ConfigError("unsupported geometry kind");
  }
  return array;
}

AntennaArray random_array(std::size_t count, const Box& bounds, double min_spacing_m,
                          std::uint64_t seed) {
  if (count == 0) throw ConfigError("array needs at least one element");
  if (min_spacing_m < 0.0) throw ConfigError("min spacing must be non-negative");

  constexpr std::size_t kAttemptsPerElement = 10000;
  Rng rng(seed);
  AntennaArray array;
  array.kind = GeometryKind::random;
  array.min_spacing_m = min_spacing_m;

  while (array.elements.size() < count) {
    bool placed = false;
    for (std::size_t attempt = 0; attempt < kAttemptsPerElement; ++attempt) {
      const Position p{rng.uniform(bounds.lo.x, bounds.hi.x),
                       rng.uniform(bounds.lo.y, bounds.hi.y),
                       rng.uniform(bounds.lo.z, bounds.hi.z)};
      bool ok = true;
      for (const Position& q : array.elements) {
        if (distance(p, q) < min_spacing_m) {
          ok = false;
          break;
        }
      }
      if (ok) {
        array.elements.push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed)
      throw DegeneracyError("random_array: spacing constraint infeasible after 10000 attempts");
  }
  return array;
}

double min_pairwise_spacing(const std::vector<Position>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, distance(points[i], points[j]));
  return best;
}

SnapResult snap_to_grid(const AntennaArray& ideal, const ScanPath& path) {
  if (path.points.empty()) throw ConfigError("snap_to_grid: empty scan path");

  SnapResult result;
  result.indices.reserve(ideal.elements.size());
  for (std::size_t e = 0; e < ideal.elements.size(); ++e) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t m = 0; m < path.points.size(); ++m) {
      const double d = distance(ideal.elements[e], path.points[m]);
      if (d < best) {
        best = d;
        best_index = m;
      }
    }
    for (std::size_t prev = 0; prev < result.indices.size(); ++prev) {
      if (result.indices[prev] == best_index)
        throw DegeneracyError("snap_to_grid: elements " + std::to_string(prev) + " and " +
                              std::to_string(e) + " collapse onto sample " +
                              std::to_string(best_index));
    }
    result.indices.push_back(best_index);
    result.max_distance_m = std::max(result.max_distance_m, best);
  }
  if (result.max_distance_m > path.coarse_pitch_m)
    throw DegeneracyError("snap_to_grid: worst snap distance " +
                          std::to_string(result.max_distance_m) +
                          " m exceeds the scan pitch; geometry not representable");
  return result;
}

}  // namespace beamgrid
