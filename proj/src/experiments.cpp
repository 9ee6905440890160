// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beamgrid/errors.hpp"
#include "beamgrid/grid_io.hpp"
#include "beamgrid/rng.hpp"
#include "beamgrid/stats.hpp"

namespace beamgrid {

namespace {

PrecodingMatrix make_precoder(const ChannelMatrix& H, Scheme scheme) {
  switch (scheme) {
    case Scheme::mr: return mr_precoder(H);
    case Scheme::po: return po_precoder(H);
    case Scheme::zf: return zf_precoder(H);
  }
  throw ConfigError("invalid scheme");
}

ReportTable make_table(const ScenarioConfig& cfg, std::vector<std::string> columns) {
  ReportTable table;
  table.columns = std::move(columns);
  table.config_hash = config_hash(cfg);
  table.seed = cfg.seed;
  return table;
}

// common maximum square aperture inside the scanned extent
double max_square_aperture(const ScenarioConfig& cfg) {
  const double sx = cfg.scan_extent.span(0);
  const double sc = cfg.scan_plane == Plane::xz ? cfg.scan_extent.span(2)
                                                : cfg.scan_extent.span(1);
  const double side = std::min(sx, sc);
  if (!(side > 0.0)) throw ConfigError("scan extent too small for an array aperture");
  return side * side;
}

double snapped_rate(const ChannelGrid& grid, const AntennaArray& array, Scheme scheme,
                    std::size_t subcarrier, double noise_power) {
  const SnapResult snap = snap_to_grid(array, grid.path);
  return selection_sum_rate(grid, snap.indices, scheme, subcarrier, noise_power);
}

std::vector<double> random_geometry_rates(const ChannelGrid& grid, const ScenarioConfig& cfg,
                                          std::size_t count, const Box& bounds,
                                          double min_spacing) {
  if (cfg.sweep.random_trials == 0)
    throw ConfigError("sweep.random_trials must be at least 1");
  std::vector<double> rates;
  rates.reserve(cfg.sweep.random_trials);
  for (std::size_t trial = 0; trial < cfg.sweep.random_trials; ++trial) {
    const AntennaArray arr = random_array(
        count, bounds, min_spacing,
        derive_seed(cfg.sweep.random_seed, trial * 1000003ULL + count));
    rates.push_back(snapped_rate(grid, arr, cfg.precoder, cfg.subcarrier, cfg.noise_power));
  }
  return rates;
}

}  // namespace

double selection_sum_rate(const ChannelGrid& grid,
                          const std::vector<std::size_t>& point_indices, Scheme scheme,
                          std::size_t subcarrier, double noise_power) {
  const ChannelMatrix H = extract_channel_matrix(grid, point_indices, subcarrier);
  const PrecodingMatrix P = make_precoder(H, scheme);
  return sum_rate(H, P, noise_power).sum_rate_bits;
}

ReportTable run_aperture_sweep(const ScenarioConfig& cfg) {
  if (cfg.array.kind != GeometryKind::square)
    throw ConfigError("aperture sweep requires the square array geometry");
  if (cfg.sweep.apertures_m2.empty()) throw ConfigError("sweep.apertures_m2 is empty");
  for (std::size_t i = 1; i < cfg.sweep.apertures_m2.size(); ++i)
    if (cfg.sweep.apertures_m2[i] <= cfg.sweep.apertures_m2[i - 1])
      throw ConfigError("sweep.apertures_m2 must be strictly increasing");

  const ScanPath path = build_path(cfg);
  const Scene scene = build_scene(cfg);
  const ChannelGrid grid = synthesize_grid(scene, path, {cfg.subcarrier});

  // the reference band: random geometries drawn from the full scan area
  const double half_lambda = cfg.plan.wavelength_m() / 2.0;
  const std::vector<double> random_rates =
      random_geometry_rates(grid, cfg, cfg.array.count, cfg.scan_extent, half_lambda);
  const double p05 = percentile(random_rates, 5.0);
  const double p95 = percentile(random_rates, 95.0);

  ReportTable table = make_table(cfg, {"aperture_m2", "spacing_m", "rate_square_bits",
                                       "rate_random_p05_bits", "rate_random_p95_bits"});
  for (double aperture : cfg.sweep.apertures_m2) {
    const AntennaArray arr =
        make_array(GeometryKind::square, cfg.array.count, aperture, cfg.array.center,
                   cfg.array.plane);
    const double rate = snapped_rate(grid, arr, cfg.precoder, cfg.subcarrier, cfg.noise_power);
    table.add_row({aperture, aperture_to_spacing(aperture), rate, p05, p95});
  }
  return table;
}

ReportTable run_geometry_sweep(const ScenarioConfig& cfg) {
  if (cfg.sweep.geometries.empty()) throw ConfigError("sweep.geometries is empty");
  if (cfg.sweep.antenna_counts.empty()) throw ConfigError("sweep.antenna_counts is empty");

  const double aperture =
      cfg.array.aperture_set ? cfg.array.aperture_m2 : max_square_aperture(cfg);
  const double side = std::sqrt(aperture);
  const Box aperture_box{{cfg.array.center.x - side / 2.0, cfg.array.center.y - side / 2.0,
                          cfg.array.center.z},
                         {cfg.array.center.x + side / 2.0, cfg.array.center.y + side / 2.0,
                          cfg.array.center.z}};
  const double half_lambda = cfg.plan.wavelength_m() / 2.0;

  const ScanPath path = build_path(cfg);
  const Scene scene = build_scene(cfg);
  const ChannelGrid grid = synthesize_grid(scene, path, {cfg.subcarrier});

  ReportTable table = make_table(cfg, {"geometry", "antenna_count", "rate_sum_bits",
                                       "rate_p05_bits", "rate_p95_bits", "note"});
  for (GeometryKind kind : cfg.sweep.geometries) {
    for (std::size_t count : cfg.sweep.antenna_counts) {
      if (kind == GeometryKind::random) {
        const std::vector<double> rates =
            random_geometry_rates(grid, cfg, count, aperture_box, half_lambda);
        table.add_row({to_string(kind), static_cast<std::int64_t>(count), median(rates),
                       percentile(rates, 5.0), percentile(rates, 95.0),
                       std::string("median over ") + std::to_string(rates.size()) + " seeds"});
        continue;
      }
      try {
        const AntennaArray arr =
            make_array(kind, count, aperture, cfg.array.center, cfg.array.plane);
        const double rate =
            snapped_rate(grid, arr, cfg.precoder, cfg.subcarrier, cfg.noise_power);
        table.add_row({to_string(kind), static_cast<std::int64_t>(count), rate, rate, rate,
                       std::string()});
      } catch (const ConfigError& e) {
        // count incompatible with this geometry kind
        table.add_row({to_string(kind), static_cast<std::int64_t>(count),
                       std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN(),
                       std::string("skipped: ") + e.what()});
      }
    }
  }
  return table;
}

ReportTable run_precoder_compare(const ScenarioConfig& cfg) {
  if (!cfg.noise_power_set || !(cfg.noise_power > 0.0))
    throw ConfigError("precoder comparison requires an explicit positive noise_power");
  if (cfg.sweep.antenna_counts.empty()) throw ConfigError("sweep.antenna_counts is empty");

  const double aperture =
      cfg.array.aperture_set ? cfg.array.aperture_m2 : max_square_aperture(cfg);
  const ScanPath path = build_path(cfg);
  const Scene scene = build_scene(cfg);
  const ChannelGrid grid = synthesize_grid(scene, path, {cfg.subcarrier});
  const std::size_t n_users = cfg.users.size();

  ReportTable table =
      make_table(cfg, {"scheme", "antenna_count", "rate_sum_bits", "note"});
  for (std::size_t count : cfg.sweep.antenna_counts) {
    const AntennaArray arr =
        make_array(GeometryKind::square, count, aperture, cfg.array.center, cfg.array.plane);
    const SnapResult snap = snap_to_grid(arr, path);
    for (Scheme scheme : {Scheme::mr, Scheme::po, Scheme::zf}) {
      if (scheme == Scheme::zf && count == n_users) {
        table.add_row({to_string(scheme), static_cast<std::int64_t>(count),
                       std::numeric_limits<double>::quiet_NaN(),
                       std::string("skipped: zf degenerate at M == N")});
        continue;
      }
      const double rate =
          selection_sum_rate(grid, snap.indices, scheme, cfg.subcarrier, cfg.noise_power);
      table.add_row(
          {to_string(scheme), static_cast<std::int64_t>(count), rate, std::string()});
    }
  }
  return table;
}

OcclusionResult run_occlusion_transition(const ScenarioConfig& cfg) {
  const std::vector<double>& stages = cfg.sweep.occlusion_stages;
  if (stages.empty()) throw ConfigError("sweep.occlusion_stages is empty");
  if (stages.front() != 0.0)
    throw ConfigError("occlusion stages must start at 0 (the LoS reference stage)");
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i] < 0.0 || stages[i] > 1.0)
      throw ConfigError("occlusion stage fractions must lie in [0, 1]");
    if (i > 0 && stages[i] <= stages[i - 1])
      throw ConfigError("occlusion stages must be strictly increasing");
  }

  const ScanPath path = build_path(cfg);
  const Scene base_scene = build_scene(cfg);
  const std::size_t target_index = nearest_point_index(path, cfg.target);
  const double exclusion = cfg.plan.wavelength_m() / 2.0;

  // probe points for the per-antenna shadow test: extent corners, center,
  // and the target
  std::vector<Position> probes;
  const Box& e = cfg.scan_extent;
  probes.push_back({e.lo.x, e.lo.y, e.lo.z});
  probes.push_back({e.hi.x, e.lo.y, e.lo.z});
  probes.push_back({e.lo.x, e.hi.y, e.hi.z});
  probes.push_back({e.hi.x, e.hi.y, e.hi.z});
  probes.push_back(e.center());
  probes.push_back(path.points[target_index]);

  OcclusionResult result;
  result.path = path;
  result.target_index = target_index;
  result.table = make_table(cfg, {"stage_fraction", "spatial_sir_db", "excluded_points",
                                  "shadowed_antennas", "unshadowed_energy_fraction",
                                  "map_peak_db", "note"});

  double los_reference = 0.0;
  for (double fraction : stages) {
    Scene scene = base_scene;
    if (fraction > 0.0) scene.occluders.push_back(occlusion_stage_plate(cfg, fraction));
    const ChannelGrid grid = synthesize_grid(scene, path, {cfg.subcarrier});
    const std::size_t slot = grid.subcarrier_slot(cfg.subcarrier);

    OcclusionStage stage;
    stage.fraction = fraction;
    stage.shadowed.resize(grid.n_users());
    std::size_t shadowed_count = 0;
    for (std::size_t n = 0; n < grid.n_users(); ++n) {
      bool all_blocked = true;
      for (const Position& probe : probes) {
        if (!segment_blocked(scene.users[n], probe, scene.occluders)) {
          all_blocked = false;
          break;
        }
      }
      stage.shadowed[n] = all_blocked;
      if (all_blocked) ++shadowed_count;
    }

    arma::cx_vec target_row(grid.n_users());
    for (std::size_t n = 0; n < grid.n_users(); ++n)
      target_row(n) = grid.coeffs(target_index, n, slot);
    const double row_norm = arma::norm(target_row);

    if (row_norm == 0.0) {
      stage.degenerate = true;
      result.table.add_row({fraction, std::numeric_limits<double>::quiet_NaN(),
                            static_cast<std::int64_t>(0),
                            static_cast<std::int64_t>(shadowed_count),
                            std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN(),
                            std::string("degenerate: zero channel at target "
                                        "(full blockage needs scatterers)")});
      result.stages.push_back(std::move(stage));
      continue;
    }

    stage.sir = spatial_sir(grid, {}, target_index, cfg.subcarrier, exclusion);

    // unit transmit power MR beam toward the target
    const arma::cx_vec beam = arma::conj(target_row) / row_norm;
    if (fraction == 0.0) {
      stage.map = energy_map(grid, {}, beam, cfg.subcarrier, MapReference::self_max);
      los_reference = stage.map.reference_power;
    } else {
      if (los_reference == 0.0)
        throw DegeneracyError("occlusion transition: LoS reference stage is degenerate");
      stage.map = energy_map(grid, {}, beam, cfg.subcarrier, MapReference::external,
                             los_reference);
    }

    ChannelMatrix target_channel;
    target_channel.subcarrier = cfg.subcarrier;
    target_channel.h = target_row.st();  // 1 x N: the target as the only served user
    stage.per_antenna_energy = antenna_energy(mr_precoder(target_channel));

    double unshadowed = 0.0;
    for (std::size_t n = 0; n < grid.n_users(); ++n)
      if (!stage.shadowed[n]) unshadowed += stage.per_antenna_energy(n);
    stage.unshadowed_energy_fraction = unshadowed;

    const double peak_db = *std::max_element(stage.map.db.begin(), stage.map.db.end());
    result.table.add_row({fraction, stage.sir.value_db,
                          static_cast<std::int64_t>(stage.sir.excluded_points),
                          static_cast<std::int64_t>(shadowed_count),
                          stage.unshadowed_energy_fraction, peak_db, std::string()});
    result.stages.push_back(std::move(stage));
  }
  return result;
}

}  // namespace beamgrid
