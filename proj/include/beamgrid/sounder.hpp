// SPDX-License-Identifier: Apache-2.0
//
// Simulated OFDM channel sounding and measurement-verification statistics:
// pilot averaging, noise estimation from unused subcarriers, phase-drift to
// position conversion, phase-difference reproducibility.

#pragma once

#include <armadillo>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "beamgrid/geometry.hpp"
#include "beamgrid/scene.hpp"

namespace beamgrid {

struct SounderConfig {
  FrequencyPlan plan;                   // default 2.35 GHz / 40 MHz / 1024 / 0.9
  std::size_t symbols_per_packet = 20;  // averaging gain 10 log10(20) ~ 13 dB
  double cp_fraction = 0.25;            // documented config only, not simulated
  double snr_floor_db = 30.0;
};

struct ChannelEstimate {
  arma::cx_vec estimate;   // one entry per subcarrier; unused carry averaged noise
  std::vector<bool> used;  // subcarrier usage mask
  double noise_power_estimate = 0.0;  // per-observation noise power
  double snr_db = 0.0;                // +inf sentinel when no noise observed
  bool snr_ok = true;                 // snr_db > snr_floor_db
};

// The unused (1 - used_fraction) of subcarriers split evenly across the two
// band edges, rounded to whole subcarriers.
std::vector<bool> used_subcarrier_mask(const FrequencyPlan& plan);

// Per used subcarrier: symbols_per_packet noisy unit-pilot observations,
// least-squares per symbol, averaged across symbols. noise_power is the
// total complex noise power per observation.
ChannelEstimate simulate_sounding(const arma::cx_vec& true_channel, const SounderConfig& cfg,
                                  double noise_power, std::uint64_t seed);

// d_off = lambda * dphi / (2 pi), sign preserved
double phase_to_offset(double delta_phase_rad, double lambda_m);

// wrap to (-pi, pi]
double wrap_phase(double rad);

struct PhaseDiffStats {
  std::vector<double> deltas_rad;    // wrapped per-point phase differences
  double circular_mean_rad = 0.0;    // arg of the mean unit phasor
  double resultant_length = 0.0;     // |mean unit phasor|, 1 = reproducible
  double offset_p99_m = 0.0;         // p99 of |offset| around the circular mean
};

// Per-point phase difference between two grids of identical layout for one
// user and subcarrier. Points where either grid is exactly zero (fully
// blocked) are excluded. Offsets use the carrier wavelength.
PhaseDiffStats grid_phase_stats(const ChannelGrid& grid_a, const ChannelGrid& grid_b,
                                std::size_t subcarrier, std::size_t user = 0);

}  // namespace beamgrid
