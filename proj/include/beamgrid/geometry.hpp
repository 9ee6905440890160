// SPDX-License-Identifier: Apache-2.0
//
// Positions, frequency plan, antenna-array generators and the
// aperture/spacing algebra.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace beamgrid {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position& a, const Position& b);
bool position_finite(const Position& p);

// axis-aligned box; degenerate (lo == hi) axes are allowed
struct Box {
  Position lo;
  Position hi;

  double span(int axis) const;
  bool contains(const Position& p, double tol = 0.0) const;
  Position center() const;
};

// OFDM frequency plan. Subcarrier k of n sits at carrier + (k - n/2) * df
// (FFT-shifted spectrum, DC bin at k = n/2), so the center subcarrier's
// wavelength equals the carrier wavelength exactly.
struct FrequencyPlan {
  double carrier_frequency_hz = 2.35e9;
  double bandwidth_hz = 40e6;
  std::size_t num_subcarriers = 1024;
  double used_fraction = 0.9;

  void validate() const;
  double subcarrier_spacing_hz() const;
  double subcarrier_offset_hz(std::size_t index) const;
  double frequency_hz(std::size_t index) const;
  double wavelength_m() const;                   // carrier wavelength
  double wavelength_m(std::size_t index) const;  // per-subcarrier wavelength
};

enum class Plane { xy, xz, volume };
enum class GeometryKind { line_x, line_y, square, cross, circle, random, explicit_list };

// exact lowercase names used in config files
GeometryKind geometry_kind_from_string(const std::string& s);
std::string to_string(GeometryKind kind);
Plane plane_from_string(const std::string& s);
std::string to_string(Plane plane);

struct AntennaArray {
  std::vector<Position> elements;
  GeometryKind kind = GeometryKind::explicit_list;
  double min_spacing_m = 0.0;  // declared constraint; 0 means unconstrained
};

// d = sqrt(A_eff) / 2 and its exact inverse A_eff = (2 d)^2
double aperture_to_spacing(double aperture_m2);
double spacing_to_aperture(double spacing_m);

// Deterministic array geometries cut from a square aperture box of side
// sqrt(aperture_m2) centered at `center` in the given plane.
//   line_x / line_y : uniform along that axis, spanning the full side
//   square          : uniform k x k lattice (count must be a perfect square)
//   cross           : two perpendicular lines sharing the center element
//                     (count = 4a + 1)
//   circle          : uniform on the inscribed circle (diameter = side)
// count == 1 degenerates to the single center element for every kind.
AntennaArray make_array(GeometryKind kind, std::size_t count, double aperture_m2,
                        const Position& center, Plane plane);

// Uniform rejection sampling inside `bounds` with a minimum pairwise spacing;
// 10000 attempts per element before declaring the density infeasible.
AntennaArray random_array(std::size_t count, const Box& bounds, double min_spacing_m,
                          std::uint64_t seed);

double min_pairwise_spacing(const std::vector<Position>& points);

struct ScanPath;  // scanpath.hpp

struct SnapResult {
  std::vector<std::size_t> indices;  // one sample index per array element
  double max_distance_m = 0.0;
};

// Nearest sampled point per ideal element (Euclidean, ties to the lower
// index). Errors if two elements collapse onto one sample or the worst snap
// distance exceeds the coarse scan pitch.
SnapResult snap_to_grid(const AntennaArray& ideal, const ScanPath& path);

}  // namespace beamgrid
