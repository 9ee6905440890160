// SPDX-License-Identifier: Apache-2.0
//
// Evaluation quantities: spatial SIR over an area, per-user SINR, sum rate,
// spatial energy maps and wavefront ring statistics.
//
// dB convention everywhere: 10 log10(power ratio).

#pragma once

#include <armadillo>
#include <cstddef>
#include <vector>

#include "beamgrid/precoding.hpp"
#include "beamgrid/scene.hpp"

namespace beamgrid {

// extended non-negative real; `infinite` is an explicit sentinel, never a
// large float
struct Sinr {
  double value = 0.0;
  bool infinite = false;
};

struct SpatialSirReport {
  Position target;
  double value_db = 0.0;
  bool infinite = false;
  std::size_t total_points = 0;     // M of the ratio
  std::size_t excluded_points = 0;  // K points inside the exclusion circle
};

struct EnergyMap {
  std::vector<double> power;  // linear received power per grid point
  std::vector<double> db;     // normalized to reference_power
  double reference_power = 0.0;
};

struct RateReport {
  std::vector<Sinr> sinr;
  std::vector<double> rate_bits;  // log2(1 + SINR) per user
  double sum_rate_bits = 0.0;
  double noise_power = 0.0;
};

// Target-point beamforming gain over the average leaked power at all grid
// points beyond `exclusion_radius_m` of the target. `antenna_users` selects
// the user (antenna) subset forming the h vectors; empty selects all.
SpatialSirReport spatial_sir(const ChannelGrid& grid,
                             const std::vector<std::size_t>& antenna_users,
                             std::size_t target_index, std::size_t subcarrier,
                             double exclusion_radius_m);

// |h_n p_n|^2 / (sum_{k != n} |h_n p_k|^2 + noise). Interference below
// 1e-20 x signal counts as exactly zero so the zero-forcing / zero-noise
// case reports the infinite sentinel instead of inverse-rounding residue.
Sinr user_sinr(const ChannelMatrix& H, const PrecodingMatrix& P, std::size_t n,
               double noise_power);

// sum of log2(1 + SINR_n); refuses infinite SINRs (demands noise_power > 0
// and names the offending users)
RateReport sum_rate(const ChannelMatrix& H, const PrecodingMatrix& P, double noise_power);

enum class MapReference { self_max, external };

// received power |h_m beam|^2 per grid point; dB relative to the map's own
// maximum or an externally supplied reference power
EnergyMap energy_map(const ChannelGrid& grid, const std::vector<std::size_t>& antenna_users,
                     const arma::cx_vec& beam, std::size_t subcarrier, MapReference reference,
                     double external_reference_power = 0.0);

// baseband phase per grid point for one user/subcarrier
std::vector<double> phase_map(const ChannelGrid& grid, std::size_t user,
                              std::size_t subcarrier);

// Radial spacings between successive phase-zero crossings along scan lines
// collinear with the tx (wavefront ring spacings; equals lambda_sub for a
// clean LoS field). Errors when no scan line is collinear with the tx.
std::vector<double> wavefront_ring_spacings(const ChannelGrid& grid, const Position& tx,
                                            std::size_t user, std::size_t subcarrier,
                                            double alignment_tol_m = 1e-9);

}  // namespace beamgrid
