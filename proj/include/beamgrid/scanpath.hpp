// SPDX-License-Identifier: Apache-2.0
//
// Meander (serpentine) sampling paths over a plane or volume.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "beamgrid/geometry.hpp"

namespace beamgrid {

// Ordered sampling path. Lines run along the fine axis (always x); the
// coarse axis is y for xy scans, z for xz scans; volume scans stack xy
// planes in z, bottom-up. Alternate lines (and alternate planes) are
// reversed so consecutive points always differ in exactly one coordinate.
struct ScanPath {
  std::vector<Position> points;
  Plane plane = Plane::xy;
  double fine_pitch_m = 0.001;
  double coarse_pitch_m = 0.04;
};

// Samples start at the lower extent bound; the last sample sits at the
// largest whole pitch inside the extent. A zero-span axis yields one sample.
ScanPath meander_path(const Box& extent, Plane plane, double fine_pitch_m,
                      double coarse_pitch_m);

// [begin, end) index runs of constant coarse coordinates, in path order
std::vector<std::pair<std::size_t, std::size_t>> scan_lines(const ScanPath& path);

struct SamplingReport {
  double max_adjacent_spacing_m = 0.0;
  bool nyquist_ok = true;  // max spacing < lambda/2
};

// Checks consecutive in-line spacing and nearest-point spacing between
// adjacent lines against the lambda/2 spatial sampling bound.
SamplingReport validate_sampling(const ScanPath& path, const FrequencyPlan& plan);

double path_length(const ScanPath& path);

// index of the sampled point closest to p (ties to the lower index)
std::size_t nearest_point_index(const ScanPath& path, const Position& p);

}  // namespace beamgrid
