// SPDX-License-Identifier: Apache-2.0
//
// Deterministic channel synthesis: free-space LoS kernel, single-bounce
// scatterers, knife-edge plate occlusion, channel grids and matrices.

#pragma once

#include <armadillo>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "beamgrid/geometry.hpp"
#include "beamgrid/scanpath.hpp"

namespace beamgrid {

// Axis-aligned vertical plate: spans `width_m` along the horizontal axis
// perpendicular to the normal and `height_m` along z, centered at `center`.
struct Occluder {
  Position center;
  double width_m = 1.0;
  double height_m = 1.0;
  int normal_axis = 1;  // 0 = x, 1 = y
};

// single-bounce reflector with a fixed complex gain, |gain| <= 1
struct Scatterer {
  Position position;
  std::complex<double> gain{1.0, 0.0};
};

struct Scene {
  std::vector<Position> users;  // the N transmitters
  FrequencyPlan plan;
  std::vector<Occluder> occluders;
  std::vector<Scatterer> scatterers;
  std::uint64_t seed = 0;

  void validate() const;
};

// Free-space baseband gain (lambda / 4 pi r) e^{j 2 pi r / lambda_sub}.
// The amplitude uses the carrier wavelength, the phase the per-subcarrier
// wavelength; the two are deliberately separate arguments.
std::complex<double> los_coefficient(const Position& tx, const Position& rx,
                                     double lambda_carrier_m, double lambda_sub_m);

// true iff the open segment (a, b) crosses the closed plate rectangle
bool segment_blocked(const Position& a, const Position& b, const Occluder& occ);
bool segment_blocked(const Position& a, const Position& b,
                     const std::vector<Occluder>& occluders);

// Direct LoS term plus one two-hop term per visible scatterer; blocked
// terms contribute exactly zero.
std::complex<double> scene_coefficient(const Scene& scene, std::size_t user_index,
                                       const Position& rx, std::size_t subcarrier);

// Complex coefficients over (grid point, user, subcarrier slot). The
// subcarrier list holds plan indices; slot i of the cube is subcarriers[i].
struct ChannelGrid {
  ScanPath path;
  FrequencyPlan plan;
  std::vector<Position> users;
  std::vector<std::size_t> subcarriers;
  arma::cx_cube coeffs;  // n_points x n_users x n_slots

  std::size_t n_points() const { return coeffs.n_rows; }
  std::size_t n_users() const { return coeffs.n_cols; }
  std::size_t n_slots() const { return coeffs.n_slices; }
  std::size_t subcarrier_slot(std::size_t plan_index) const;  // errors if absent
};

// users (N) x antennas (M), the Eq. 2 orientation used throughout
struct ChannelMatrix {
  arma::cx_mat h;
  std::size_t subcarrier = 0;
};

// coefficients[m][n][s] = scene_coefficient(scene, n, path.points[m], s);
// evaluation order never changes the result (all randomness is consumed at
// scene construction).
ChannelGrid synthesize_grid(const Scene& scene, const ScanPath& path,
                            const std::vector<std::size_t>& subcarriers);

// h_{n,m} = grid.coeffs[point_indices[m]][n][slot(subcarrier)]
ChannelMatrix extract_channel_matrix(const ChannelGrid& grid,
                                     const std::vector<std::size_t>& point_indices,
                                     std::size_t subcarrier);

// uniform positions in `region`, uniform gain phases, fixed magnitude
std::vector<Scatterer> place_scatterers(std::size_t count, const Box& region,
                                        double gain_magnitude, std::uint64_t seed);

}  // namespace beamgrid
