// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/sounder.hpp"

#include <cmath>
#include <limits>

#include "beamgrid/errors.hpp"
#include "beamgrid/rng.hpp"
#include "beamgrid/stats.hpp"

namespace beamgrid {

std::vector<bool> used_subcarrier_mask(const FrequencyPlan& plan) {
  plan.validate();
  const auto n = plan.num_subcarriers;
  const auto guard = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * (1.0 - plan.used_fraction) / 2.0));
  std::vector<bool> mask(n, true);
  for (std::size_t i = 0; i < guard; ++i) {
    mask[i] = false;
    mask[n - 1 - i] = false;
  }
  return mask;
}

ChannelEstimate simulate_sounding(const arma::cx_vec& true_channel, const SounderConfig& cfg,
                                  double noise_power, std::uint64_t seed) {
  if (noise_power < 0.0) throw ConfigError("noise power must be non-negative");
  if (cfg.symbols_per_packet == 0) throw ConfigError("symbols_per_packet must be >= 1");
  if (true_channel.n_elem != cfg.plan.num_subcarriers)
    throw ConfigError("true channel length must match num_subcarriers");

  Rng rng(seed);
  ChannelEstimate est;
  est.used = used_subcarrier_mask(cfg.plan);
  est.estimate.set_size(true_channel.n_elem);

  const double k = static_cast<double>(cfg.symbols_per_packet);
  double unused_power_acc = 0.0;
  std::size_t unused_count = 0;
  double used_power_acc = 0.0;
  std::size_t used_count = 0;

  for (std::size_t s = 0; s < true_channel.n_elem; ++s) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t sym = 0; sym < cfg.symbols_per_packet; ++sym) {
      // unit BPSK pilot, so per-symbol LS estimate equals the observation
      const std::complex<double> y =
          (est.used[s] ? true_channel(s) : std::complex<double>{0.0, 0.0}) +
          rng.cnormal(noise_power);
      acc += y;
      if (!est.used[s]) {
        unused_power_acc += std::norm(y);
        ++unused_count;
      }
    }
    est.estimate(s) = acc / k;
    if (est.used[s]) {
      used_power_acc += std::norm(est.estimate(s));
      ++used_count;
    }
  }

  est.noise_power_estimate =
      unused_count == 0 ? 0.0 : unused_power_acc / static_cast<double>(unused_count);
  const double mean_used =
      used_count == 0 ? 0.0 : used_power_acc / static_cast<double>(used_count);
  est.snr_db = est.noise_power_estimate == 0.0
                   ? std::numeric_limits<double>::infinity()
                   : 10.0 * std::log10(mean_used / est.noise_power_estimate);
  est.snr_ok = est.snr_db > cfg.snr_floor_db;
  return est;
}

double phase_to_offset(double delta_phase_rad, double lambda_m) {
  if (!(lambda_m > 0.0)) throw ConfigError("wavelength must be positive");
  return lambda_m * delta_phase_rad / (2.0 * M_PI);
}

double wrap_phase(double rad) {
  double w = std::remainder(rad, 2.0 * M_PI);  // [-pi, pi]
  if (w == -M_PI) w = M_PI;
  return w;
}

PhaseDiffStats grid_phase_stats(const ChannelGrid& grid_a, const ChannelGrid& grid_b,
                                std::size_t subcarrier, std::size_t user) {
  if (grid_a.n_points() != grid_b.n_points() || grid_a.n_users() != grid_b.n_users())
    throw ConfigError("grid_phase_stats: dimension mismatch");
  for (std::size_t m = 0; m < grid_a.n_points(); ++m) {
    const Position& p = grid_a.path.points[m];
    const Position& q = grid_b.path.points[m];
    if (p.x != q.x || p.y != q.y || p.z != q.z)
      throw ConfigError("grid_phase_stats: paths differ at point " + std::to_string(m));
  }
  if (user >= grid_a.n_users()) throw ConfigError("grid_phase_stats: user index out of range");
  const std::size_t slot_a = grid_a.subcarrier_slot(subcarrier);
  const std::size_t slot_b = grid_b.subcarrier_slot(subcarrier);

  PhaseDiffStats stats;
  std::complex<double> resultant{0.0, 0.0};
  for (std::size_t m = 0; m < grid_a.n_points(); ++m) {
    const std::complex<double> a = grid_a.coeffs(m, user, slot_a);
    const std::complex<double> b = grid_b.coeffs(m, user, slot_b);
    if (a == std::complex<double>{0.0, 0.0} || b == std::complex<double>{0.0, 0.0}) continue;
    const double delta = wrap_phase(std::arg(b) - std::arg(a));
    stats.deltas_rad.push_back(delta);
    resultant += std::polar(1.0, delta);
  }
  if (stats.deltas_rad.empty())
    throw DegeneracyError("grid_phase_stats: no points with nonzero coefficients");

  stats.circular_mean_rad = std::arg(resultant);
  stats.resultant_length = std::abs(resultant) / static_cast<double>(stats.deltas_rad.size());

  const double lambda = grid_a.plan.wavelength_m();
  std::vector<double> offsets;
  offsets.reserve(stats.deltas_rad.size());
  for (double d : stats.deltas_rad)
    offsets.push_back(std::abs(phase_to_offset(wrap_phase(d - stats.circular_mean_rad), lambda)));
  stats.offset_p99_m = percentile(std::move(offsets), 99.0);
  return stats;
}

}  // namespace beamgrid
