// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beamgrid/errors.hpp"
#include "beamgrid/scanpath.hpp"

namespace beamgrid {

namespace {

std::vector<std::size_t> resolve_users(const ChannelGrid& grid,
                                       const std::vector<std::size_t>& antenna_users) {
  std::vector<std::size_t> users = antenna_users;
  if (users.empty()) {
    users.resize(grid.n_users());
    for (std::size_t i = 0; i < users.size(); ++i) users[i] = i;
  }
  for (std::size_t u : users)
    if (u >= grid.n_users()) throw ConfigError("antenna user index out of range");
  return users;
}

arma::cx_rowvec grid_row(const ChannelGrid& grid, std::size_t point,
                         const std::vector<std::size_t>& users, std::size_t slot) {
  arma::cx_rowvec row(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) row(i) = grid.coeffs(point, users[i], slot);
  return row;
}

}  // namespace

SpatialSirReport spatial_sir(const ChannelGrid& grid,
                             const std::vector<std::size_t>& antenna_users,
                             std::size_t target_index, std::size_t subcarrier,
                             double exclusion_radius_m) {
  if (target_index >= grid.n_points()) throw ConfigError("target index out of range");
  if (!(exclusion_radius_m > 0.0)) throw ConfigError("exclusion radius must be positive");
  const std::size_t slot = grid.subcarrier_slot(subcarrier);
  const auto users = resolve_users(grid, antenna_users);

  const arma::cx_rowvec h_t = grid_row(grid, target_index, users, slot);
  const double target_power = std::norm(arma::cdot(h_t, h_t));  // ||h_t||^4
  if (target_power == 0.0) throw DegeneracyError("spatial_sir: zero target vector");

  const Position target = grid.path.points[target_index];
  double acc = 0.0;
  std::size_t outside = 0;
  std::size_t excluded = 0;
  for (std::size_t m = 0; m < grid.n_points(); ++m) {
    if (distance(grid.path.points[m], target) <= exclusion_radius_m) {
      ++excluded;
      continue;
    }
    const arma::cx_rowvec h_m = grid_row(grid, m, users, slot);
    acc += std::norm(arma::cdot(h_t, h_m));  // |h_m h_t^H|^2
    ++outside;
  }
  if (outside == 0)
    throw DegeneracyError("spatial_sir: no grid points outside the exclusion circle");

  SpatialSirReport report;
  report.target = target;
  report.total_points = grid.n_points();
  report.excluded_points = excluded;
  const double denom = acc / static_cast<double>(outside);
  if (denom == 0.0) {
    report.infinite = true;
    report.value_db = std::numeric_limits<double>::infinity();
  } else {
    report.value_db = 10.0 * std::log10(target_power / denom);
  }
  return report;
}

Sinr user_sinr(const ChannelMatrix& H, const PrecodingMatrix& P, std::size_t n,
               double noise_power) {
  if (H.h.n_cols != P.p.n_rows || H.h.n_rows != P.p.n_cols)
    throw ConfigError("user_sinr: H and P dimensions do not conform");
  if (n >= H.h.n_rows) throw ConfigError("user_sinr: user index out of range");
  if (noise_power < 0.0) throw ConfigError("noise power must be non-negative");

  const arma::cx_rowvec h_n = H.h.row(n);
  const double signal = std::norm(arma::as_scalar(h_n * P.p.col(n)));
  double interference = 0.0;
  for (arma::uword k = 0; k < P.p.n_cols; ++k) {
    if (k == n) continue;
    interference += std::norm(arma::as_scalar(h_n * P.p.col(k)));
  }
  if (interference <= 1e-20 * signal) interference = 0.0;  // nulled to rounding residue

  const double denom = interference + noise_power;
  if (denom == 0.0) {
    if (signal == 0.0) throw DegeneracyError("user_sinr: zero signal and zero interference");
    return {0.0, true};
  }
  return {signal / denom, false};
}

RateReport sum_rate(const ChannelMatrix& H, const PrecodingMatrix& P, double noise_power) {
  RateReport report;
  report.noise_power = noise_power;

  std::string infinite_users;
  for (arma::uword n = 0; n < H.h.n_rows; ++n) {
    const Sinr s = user_sinr(H, P, n, noise_power);
    report.sinr.push_back(s);
    if (s.infinite) infinite_users += (infinite_users.empty() ? "" : ", ") + std::to_string(n);
  }
  if (!infinite_users.empty())
    throw DegeneracyError("sum_rate: infinite SINR with zero noise for user(s) " +
                          infinite_users + "; supply a positive noise_power");

  for (const Sinr& s : report.sinr) {
    const double rate = std::log2(1.0 + s.value);
    report.rate_bits.push_back(rate);
    report.sum_rate_bits += rate;
  }
  return report;
}

EnergyMap energy_map(const ChannelGrid& grid, const std::vector<std::size_t>& antenna_users,
                     const arma::cx_vec& beam, std::size_t subcarrier, MapReference reference,
                     double external_reference_power) {
  const std::size_t slot = grid.subcarrier_slot(subcarrier);
  const auto users = resolve_users(grid, antenna_users);
  if (beam.n_elem != users.size())
    throw ConfigError("energy_map: beam length must match the selected antenna count");

  EnergyMap map;
  map.power.resize(grid.n_points());
  for (std::size_t m = 0; m < grid.n_points(); ++m) {
    std::complex<double> y{0.0, 0.0};
    for (std::size_t i = 0; i < users.size(); ++i)
      y += grid.coeffs(m, users[i], slot) * beam(i);
    map.power[m] = std::norm(y);
  }

  if (reference == MapReference::self_max) {
    map.reference_power = *std::max_element(map.power.begin(), map.power.end());
  } else {
    if (!(external_reference_power > 0.0))
      throw ConfigError("energy_map: external reference power must be positive");
    map.reference_power = external_reference_power;
  }
  if (map.reference_power == 0.0)
    throw DegeneracyError("energy_map: all-zero map has no reference maximum");

  map.db.resize(map.power.size());
  for (std::size_t m = 0; m < map.power.size(); ++m)
    map.db[m] = 10.0 * std::log10(map.power[m] / map.reference_power);
  return map;
}

std::vector<double> phase_map(const ChannelGrid& grid, std::size_t user,
                              std::size_t subcarrier) {
  if (user >= grid.n_users()) throw ConfigError("phase_map: user index out of range");
  const std::size_t slot = grid.subcarrier_slot(subcarrier);
  std::vector<double> phases(grid.n_points());
  for (std::size_t m = 0; m < grid.n_points(); ++m)
    phases[m] = std::arg(grid.coeffs(m, user, slot));
  return phases;
}

std::vector<double> wavefront_ring_spacings(const ChannelGrid& grid, const Position& tx,
                                            std::size_t user, std::size_t subcarrier,
                                            double alignment_tol_m) {
  if (user >= grid.n_users()) throw ConfigError("user index out of range");
  const std::size_t slot = grid.subcarrier_slot(subcarrier);

  std::vector<double> spacings;
  bool any_aligned = false;
  for (const auto& [begin, end] : scan_lines(grid.path)) {
    const Position& head = grid.path.points[begin];
    // a line is a radial ray iff the tx sits on its axis, outside the span
    if (std::abs(head.y - tx.y) > alignment_tol_m || std::abs(head.z - tx.z) > alignment_tol_m)
      continue;
    any_aligned = true;

    // sort samples by x (serpentine lines alternate direction)
    std::vector<std::size_t> order(end - begin);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = begin + i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return grid.path.points[a].x < grid.path.points[b].x;
    });
    if (tx.x >= grid.path.points[order.front()].x - alignment_tol_m &&
        tx.x <= grid.path.points[order.back()].x + alignment_tol_m)
      throw ConfigError("wavefront rings: tx must sit outside the scan line span");

    // unwrap phase along the ray, then interpolate r at phase = 2 pi k
    std::vector<double> radius(order.size());
    std::vector<double> phase(order.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      radius[i] = distance(grid.path.points[order[i]], tx);
      const double raw = std::arg(grid.coeffs(order[i], user, slot));
      if (i > 0) {
        double prev = phase[i - 1];
        double cur = raw + offset;
        while (cur - prev > M_PI) {
          offset -= 2.0 * M_PI;
          cur -= 2.0 * M_PI;
        }
        while (cur - prev < -M_PI) {
          offset += 2.0 * M_PI;
          cur += 2.0 * M_PI;
        }
      }
      phase[i] = raw + offset;
    }

    // crossings of phase = 2 pi k, attributed to (lo, hi] per segment
    std::vector<double> crossings;
    for (std::size_t i = 1; i < order.size(); ++i) {
      const double lo = phase[i - 1];
      const double hi = phase[i];
      if (lo == hi) continue;
      const bool up = hi > lo;
      double k = up ? std::floor(lo / (2.0 * M_PI)) + 1.0
                    : std::ceil(lo / (2.0 * M_PI)) - 1.0;
      for (;; k += up ? 1.0 : -1.0) {
        const double level = 2.0 * M_PI * k;
        if (up ? level > hi : level < hi) break;
        const double t = (level - lo) / (hi - lo);
        crossings.push_back(radius[i - 1] + t * (radius[i] - radius[i - 1]));
      }
    }
    for (std::size_t i = 1; i < crossings.size(); ++i)
      spacings.push_back(std::abs(crossings[i] - crossings[i - 1]));
  }

  if (!any_aligned)
    throw ConfigError("wavefront rings: no scan line is collinear with the tx");
  return spacings;
}

}  // namespace beamgrid
