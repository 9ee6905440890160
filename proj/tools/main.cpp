// SPDX-License-Identifier: Apache-2.0
//
// beamgrid command-line interface: batch experiment runners over synthetic
// (or imported) channel grids. Artifacts are CSV tables plus optional PNG
// quick-looks; exit codes: 0 ok, 2 config, 3 numerical degeneracy, 4 I/O.

#include <CLI11.hpp>
#include <armadillo>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "beamgrid/errors.hpp"
#include "beamgrid/experiments.hpp"
#include "beamgrid/grid_io.hpp"
#include "beamgrid/metrics.hpp"
#include "beamgrid/render.hpp"
#include "beamgrid/report.hpp"
#include "beamgrid/rng.hpp"
#include "beamgrid/scenario.hpp"
#include "beamgrid/sounder.hpp"
#include "beamgrid/stats.hpp"

namespace fs = std::filesystem;
using namespace beamgrid;

namespace {

struct CommonOpts {
  std::string config_file;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_file, "scenario config JSON file");
  cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "override the config seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--format", opts.format, "csv, png or both")
      ->check(CLI::IsMember({"csv", "png", "both"}))
      ->capture_default_str();
}

ScenarioConfig resolve_config(const CommonOpts& opts, ScenarioConfig fallback) {
  ScenarioConfig cfg =
      opts.config_file.empty() ? std::move(fallback) : load_config_file(opts.config_file);
  if (opts.seed_set) cfg.seed = opts.seed;
  return cfg;
}

fs::path ensure_out_dir(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
  return dir;
}

bool want_csv(const CommonOpts& o) { return o.format != "png"; }
bool want_png(const CommonOpts& o) { return o.format != "csv"; }

void write_table(const ReportTable& table, const fs::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  table.write_csv(out);
  if (!out) throw IoError("write failed on " + file.string());
  std::cout << "wrote " << file.string() << "\n";
}

ReportTable map_table(const ScenarioConfig& cfg, const ScanPath& path,
                      const std::vector<double>& power, const std::vector<double>& db) {
  ReportTable t;
  t.columns = {"point_index", "x_m", "y_m", "z_m", "power", "db"};
  t.config_hash = config_hash(cfg);
  t.seed = cfg.seed;
  for (std::size_t m = 0; m < path.points.size(); ++m)
    t.add_row({static_cast<std::int64_t>(m), path.points[m].x, path.points[m].y,
               path.points[m].z, power[m], db[m]});
  return t;
}

ChannelGrid synthesize_from_config(const ScenarioConfig& cfg) {
  return synthesize_grid(build_scene(cfg), build_path(cfg), {cfg.subcarrier});
}

void chart_from_table(const ReportTable& table, std::size_t x_col,
                      const std::vector<std::size_t>& y_cols, const fs::path& file) {
  std::vector<ChartSeries> series(y_cols.size());
  for (const auto& row : table.rows) {
    const double* x = std::get_if<double>(&row[x_col]);
    const std::int64_t* xi = std::get_if<std::int64_t>(&row[x_col]);
    const double xv = x ? *x : (xi ? static_cast<double>(*xi) : 0.0);
    for (std::size_t i = 0; i < y_cols.size(); ++i) {
      if (const double* y = std::get_if<double>(&row[y_cols[i]])) {
        series[i].x.push_back(xv);
        series[i].y.push_back(*y);
      }
    }
  }
  render_chart_png(series, file.string());
  std::cout << "wrote " << file.string() << "\n";
}

int run_simulate_grid(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, default_config());
  const fs::path dir = ensure_out_dir(opts);
  const ChannelGrid grid = synthesize_from_config(cfg);
  const std::string prefix = (dir / "grid").string();
  export_grid(grid, prefix);
  std::cout << "wrote " << prefix << ".meta.json and " << prefix << ".grid.csv ("
            << grid.n_points() << " points, " << grid.n_users() << " users, "
            << grid.n_slots() << " subcarriers)\n";
  return kExitOk;
}

int run_import(const std::string& in_prefix, const std::string& out_prefix) {
  const ChannelGrid grid = import_grid(in_prefix);
  std::cout << "imported " << in_prefix << ": " << grid.n_points() << " points, "
            << grid.n_users() << " users, " << grid.n_slots() << " subcarriers, plane "
            << to_string(grid.path.plane) << "\n";
  if (!out_prefix.empty()) {
    export_grid(grid, out_prefix);
    std::cout << "re-exported to " << out_prefix << ".{meta.json,grid.csv}\n";
  }
  return kExitOk;
}

int run_wavefront(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, wavefront_config());
  const fs::path dir = ensure_out_dir(opts);
  const ChannelGrid grid = synthesize_from_config(cfg);
  const std::vector<double> phases = phase_map(grid, 0, cfg.subcarrier);

  ReportTable t;
  t.columns = {"point_index", "x_m", "y_m", "z_m", "phase_rad"};
  t.config_hash = config_hash(cfg);
  t.seed = cfg.seed;
  for (std::size_t m = 0; m < grid.n_points(); ++m)
    t.add_row({static_cast<std::int64_t>(m), grid.path.points[m].x, grid.path.points[m].y,
               grid.path.points[m].z, phases[m]});
  if (want_csv(opts)) write_table(t, dir / "wavefront.csv");
  if (want_png(opts)) {
    render_heatmap_png(grid.path, phases, (dir / "wavefront.png").string(), 2.0 * M_PI);
    std::cout << "wrote " << (dir / "wavefront.png").string() << "\n";
  }

  try {
    const auto spacings = wavefront_ring_spacings(grid, cfg.users.at(0), 0, cfg.subcarrier);
    if (!spacings.empty())
      std::cout << "ring spacing median " << format_double(median(spacings)) << " m (lambda "
                << format_double(cfg.plan.wavelength_m()) << " m)\n";
  } catch (const ConfigError&) {
    std::cout << "tx not collinear with any scan line; ring statistics skipped\n";
  }
  return kExitOk;
}

int run_energy_map(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, default_config());
  const fs::path dir = ensure_out_dir(opts);
  const ChannelGrid grid = synthesize_from_config(cfg);
  const std::size_t target = nearest_point_index(grid.path, cfg.target);
  const std::size_t slot = grid.subcarrier_slot(cfg.subcarrier);

  arma::cx_vec row(grid.n_users());
  for (std::size_t n = 0; n < grid.n_users(); ++n) row(n) = grid.coeffs(target, n, slot);
  const double nrm = arma::norm(row);
  if (nrm == 0.0) throw DegeneracyError("energy-map: zero channel at the target point");
  const arma::cx_vec beam = arma::conj(row) / nrm;

  const EnergyMap map = energy_map(grid, {}, beam, cfg.subcarrier, MapReference::self_max);
  if (want_csv(opts)) write_table(map_table(cfg, grid.path, map.power, map.db),
                                  dir / "energy_map.csv");
  if (want_png(opts)) {
    render_heatmap_png(grid.path, map.db, (dir / "energy_map.png").string());
    std::cout << "wrote " << (dir / "energy_map.png").string() << "\n";
  }
  std::cout << "target point " << target << " at (" << format_double(cfg.target.x) << ", "
            << format_double(cfg.target.y) << "); reference power "
            << format_double(map.reference_power) << "\n";
  return kExitOk;
}

int run_spatial_sir(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, default_config());
  const fs::path dir = ensure_out_dir(opts);
  const ChannelGrid grid = synthesize_from_config(cfg);
  const std::size_t target = nearest_point_index(grid.path, cfg.target);
  const SpatialSirReport report =
      spatial_sir(grid, {}, target, cfg.subcarrier, cfg.plan.wavelength_m() / 2.0);

  ReportTable t;
  t.columns = {"target_x_m", "target_y_m", "target_z_m", "sir_db", "total_points",
               "excluded_points"};
  t.config_hash = config_hash(cfg);
  t.seed = cfg.seed;
  t.add_row({report.target.x, report.target.y, report.target.z, report.value_db,
             static_cast<std::int64_t>(report.total_points),
             static_cast<std::int64_t>(report.excluded_points)});
  if (want_csv(opts)) write_table(t, dir / "spatial_sir.csv");
  std::cout << "spatial SIR " << format_double(report.value_db) << " dB at ("
            << format_double(report.target.x) << ", " << format_double(report.target.y)
            << "), " << report.excluded_points << " of " << report.total_points
            << " points excluded\n";
  return kExitOk;
}

int run_sweep(const CommonOpts& opts, const char* name, ScenarioConfig fallback,
              ReportTable (*runner)(const ScenarioConfig&), std::size_t x_col,
              const std::vector<std::size_t>& y_cols) {
  const ScenarioConfig cfg = resolve_config(opts, std::move(fallback));
  const fs::path dir = ensure_out_dir(opts);
  const ReportTable table = runner(cfg);
  if (want_csv(opts)) write_table(table, dir / (std::string(name) + ".csv"));
  if (want_png(opts))
    chart_from_table(table, x_col, y_cols, dir / (std::string(name) + ".png"));
  return kExitOk;
}

int run_precoder_compare_cmd(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, precoder_compare_config());
  const fs::path dir = ensure_out_dir(opts);
  const ReportTable table = run_precoder_compare(cfg);
  if (want_csv(opts)) write_table(table, dir / "precoder_compare.csv");
  if (want_png(opts)) {
    // one series per scheme
    std::vector<ChartSeries> series(3);
    for (const auto& row : table.rows) {
      const std::string& scheme = std::get<std::string>(row[0]);
      const std::size_t idx = scheme == "mr" ? 0 : (scheme == "po" ? 1 : 2);
      if (const double* rate = std::get_if<double>(&row[2])) {
        if (std::isfinite(*rate)) {
          series[idx].x.push_back(static_cast<double>(std::get<std::int64_t>(row[1])));
          series[idx].y.push_back(*rate);
        }
      }
    }
    render_chart_png(series, (dir / "precoder_compare.png").string());
    std::cout << "wrote " << (dir / "precoder_compare.png").string() << "\n";
  }
  return kExitOk;
}

int run_occlusion(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, occlusion_config());
  const fs::path dir = ensure_out_dir(opts);
  const OcclusionResult result = run_occlusion_transition(cfg);
  if (want_csv(opts)) write_table(result.table, dir / "occlusion.csv");
  for (std::size_t i = 0; i < result.stages.size(); ++i) {
    const OcclusionStage& stage = result.stages[i];
    if (stage.degenerate) {
      std::cout << "stage " << format_double(stage.fraction) << " degenerate (zero channel)\n";
      continue;
    }
    const std::string tag = "occlusion_stage" + std::to_string(i);
    if (want_csv(opts))
      write_table(map_table(cfg, result.path, stage.map.power, stage.map.db),
                  dir / (tag + "_map.csv"));
    if (want_png(opts)) {
      render_heatmap_png(result.path, stage.map.db, (dir / (tag + "_map.png")).string());
      std::cout << "wrote " << (dir / (tag + "_map.png")).string() << "\n";
    }
    std::cout << "stage " << format_double(stage.fraction) << ": spatial SIR "
              << format_double(stage.sir.value_db) << " dB, unshadowed energy fraction "
              << format_double(stage.unshadowed_energy_fraction) << "\n";
  }
  return kExitOk;
}

int run_sounder_sim(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, default_config());
  const fs::path dir = ensure_out_dir(opts);

  SounderConfig scfg;
  scfg.plan = cfg.plan;
  scfg.symbols_per_packet = cfg.sounder.symbols_per_packet;
  scfg.cp_fraction = cfg.sounder.cp_fraction;
  scfg.snr_floor_db = cfg.sounder.snr_floor_db;
  SounderConfig single = scfg;
  single.symbols_per_packet = 1;

  // physical single-link true channel between the first user and the target
  arma::cx_vec truth(cfg.plan.num_subcarriers);
  for (std::size_t s = 0; s < cfg.plan.num_subcarriers; ++s)
    truth(s) = los_coefficient(cfg.users.at(0), cfg.target, cfg.plan.wavelength_m(),
                               cfg.plan.wavelength_m(s));

  const double noise = cfg.sounder.noise_power;
  const std::size_t runs = cfg.sounder.runs;
  const auto mask = used_subcarrier_mask(cfg.plan);

  double mse_single = 0.0;
  double mse_avg = 0.0;
  double noise_est_acc = 0.0;
  std::size_t mse_count = 0;
  for (std::size_t run = 0; run < runs; ++run) {
    const ChannelEstimate e1 = simulate_sounding(truth, single, noise, derive_seed(cfg.seed, run));
    const ChannelEstimate ek =
        simulate_sounding(truth, scfg, noise, derive_seed(cfg.seed, run + runs));
    for (std::size_t s = 0; s < mask.size(); ++s) {
      if (!mask[s]) continue;
      mse_single += std::norm(e1.estimate(s) - truth(s));
      mse_avg += std::norm(ek.estimate(s) - truth(s));
      ++mse_count;
    }
    noise_est_acc += ek.noise_power_estimate;
  }
  mse_single /= static_cast<double>(mse_count);
  mse_avg /= static_cast<double>(mse_count);
  const double gain_db = 10.0 * std::log10(mse_single / mse_avg);
  const double expected_db = 10.0 * std::log10(static_cast<double>(scfg.symbols_per_packet));
  const double noise_est = noise_est_acc / static_cast<double>(runs);

  ReportTable t;
  t.columns = {"runs", "symbols_per_packet", "mse_single", "mse_averaged", "gain_db",
               "expected_gain_db", "noise_power", "noise_power_estimate"};
  t.config_hash = config_hash(cfg);
  t.seed = cfg.seed;
  t.add_row({static_cast<std::int64_t>(runs),
             static_cast<std::int64_t>(scfg.symbols_per_packet), mse_single, mse_avg, gain_db,
             expected_db, noise, noise_est});
  if (want_csv(opts)) write_table(t, dir / "sounder.csv");
  std::cout << "averaging gain " << format_double(gain_db) << " dB (expected "
            << format_double(expected_db) << " dB), noise estimate "
            << format_double(noise_est) << " vs true " << format_double(noise) << "\n";
  return kExitOk;
}

int run_phase_stats(const CommonOpts& opts) {
  const ScenarioConfig cfg = resolve_config(opts, phase_stats_config());
  const fs::path dir = ensure_out_dir(opts);
  const ScanPath path = build_path(cfg);
  const Scene scene_a = build_scene(cfg);

  Scene scene_b = scene_a;  // same scatterer realization, shifted transmitters
  for (Position& u : scene_b.users) {
    u.x += cfg.tx_shift.x;
    u.y += cfg.tx_shift.y;
    u.z += cfg.tx_shift.z;
  }

  const ChannelGrid grid_a = synthesize_grid(scene_a, path, {cfg.subcarrier});
  ChannelGrid grid_b = synthesize_grid(scene_b, path, {cfg.subcarrier});
  if (cfg.injected_drift_rad != 0.0)
    grid_b.coeffs *= std::polar(1.0, cfg.injected_drift_rad);

  const PhaseDiffStats stats = grid_phase_stats(grid_a, grid_b, cfg.subcarrier);
  const double implied_offset =
      phase_to_offset(stats.circular_mean_rad, cfg.plan.wavelength_m());

  ReportTable t;
  t.columns = {"points",  "circular_mean_rad", "resultant_length",
               "offset_p99_m", "implied_mean_offset_m"};
  t.config_hash = config_hash(cfg);
  t.seed = cfg.seed;
  t.add_row({static_cast<std::int64_t>(stats.deltas_rad.size()), stats.circular_mean_rad,
             stats.resultant_length, stats.offset_p99_m, implied_offset});
  if (want_csv(opts)) write_table(t, dir / "phase_stats.csv");
  std::cout << "resultant length " << format_double(stats.resultant_length)
            << ", circular mean " << format_double(stats.circular_mean_rad)
            << " rad (offset " << format_double(implied_offset) << " m), p99 offset "
            << format_double(stats.offset_p99_m) << " m\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"beamgrid: channel-grid simulation and massive MIMO precoding analysis"};
  app.require_subcommand(1);

  CommonOpts opts;
  int rc = kExitOk;
  std::string import_in;
  std::string import_out;

  auto* simulate = app.add_subcommand("simulate-grid", "synthesize and export a channel grid");
  add_common(simulate, opts);
  simulate->callback([&] { rc = run_simulate_grid(opts); });

  auto* exp = app.add_subcommand("export", "alias of simulate-grid");
  add_common(exp, opts);
  exp->callback([&] { rc = run_simulate_grid(opts); });

  auto* imp = app.add_subcommand("import", "read and validate a grid file pair");
  imp->add_option("--in", import_in, "grid file prefix")->required();
  imp->add_option("--out-prefix", import_out, "optional re-export prefix");
  imp->callback([&] { rc = run_import(import_in, import_out); });

  auto* wavefront = app.add_subcommand("wavefront", "baseband phase map and ring statistics");
  add_common(wavefront, opts);
  wavefront->callback([&] { rc = run_wavefront(opts); });

  auto* emap = app.add_subcommand("energy-map", "MR-precoded received energy map");
  add_common(emap, opts);
  emap->callback([&] { rc = run_energy_map(opts); });

  auto* sir = app.add_subcommand("spatial-sir", "spatial SIR at the target position");
  add_common(sir, opts);
  sir->callback([&] { rc = run_spatial_sir(opts); });

  auto* aperture = app.add_subcommand("aperture-sweep", "sum rate vs aperture size");
  add_common(aperture, opts);
  aperture->callback([&] {
    rc = run_sweep(opts, "aperture_sweep", aperture_sweep_config(), run_aperture_sweep, 0,
                   {2, 3, 4});
  });

  auto* geometry = app.add_subcommand("geometry-sweep", "sum rate vs array geometry");
  add_common(geometry, opts);
  geometry->callback([&] {
    rc = run_sweep(opts, "geometry_sweep", geometry_sweep_config(), run_geometry_sweep, 1,
                   {2});
  });

  auto* precoder = app.add_subcommand("precoder-compare", "mr/po/zf sum-rate comparison");
  add_common(precoder, opts);
  precoder->callback([&] { rc = run_precoder_compare_cmd(opts); });

  auto* occlusion =
      app.add_subcommand("occlusion-transition", "LoS to NLoS transition study");
  add_common(occlusion, opts);
  occlusion->callback([&] { rc = run_occlusion(opts); });

  auto* sounder = app.add_subcommand("sounder-sim", "OFDM sounding Monte Carlo");
  add_common(sounder, opts);
  sounder->callback([&] { rc = run_sounder_sim(opts); });

  auto* phase = app.add_subcommand("phase-stats", "phase-difference reproducibility study");
  add_common(phase, opts);
  phase->callback([&] { rc = run_phase_stats(opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegeneracyError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
