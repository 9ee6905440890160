// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: JSON schema, desk-scale defaults per experiment,
// scene/path construction, canonical config hashing.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beamgrid/geometry.hpp"
#include "beamgrid/precoding.hpp"
#include "beamgrid/scanpath.hpp"
#include "beamgrid/scene.hpp"

namespace beamgrid {

enum class ScattererPlacement { box, ring, sphere };

struct ScattererSpec {
  std::size_t count = 0;
  double gain_magnitude = 0.3;
  ScattererPlacement placement = ScattererPlacement::box;
  Box region;  // box placement; default: elevated clutter box near the scan area
  bool region_set = false;
  // ring: wall-like clutter around the scene at all azimuths;
  // sphere: isotropic shell (image-source-like, includes below-plane
  // virtual sources) giving sinc spatial correlation with its null at
  // lambda/2 element spacing
  Position ring_center;  // default: midpoint of scan-extent center and user centroid
  bool ring_center_set = false;
  double ring_radius_min_m = 2.5;
  double ring_radius_max_m = 4.0;
  double ring_z_min_m = 0.2;
  double ring_z_max_m = 2.2;
  std::uint64_t seed = 0;  // derived from the scene seed unless set
  bool seed_set = false;
};

struct ArraySpec {
  GeometryKind kind = GeometryKind::square;
  std::size_t count = 9;
  double aperture_m2 = 0.02;
  bool aperture_set = false;  // sweeps default to the max square in the extent
  Position center;
  bool center_set = false;  // default: scan extent center
  Plane plane = Plane::xy;
};

struct SweepSpec {
  std::vector<double> apertures_m2;
  std::vector<std::size_t> antenna_counts;
  std::vector<GeometryKind> geometries;
  std::vector<double> occlusion_stages;  // plate coverage fractions, ascending from 0
  std::size_t random_trials = 100;
  std::uint64_t random_seed = 7777;
  std::vector<std::uint64_t> seeds;  // multi-seed experiment repetitions
};

struct SounderSpec {
  std::size_t symbols_per_packet = 20;
  double cp_fraction = 0.25;
  double snr_floor_db = 30.0;
  double noise_power = 1e-9;  // ~40 dB SNR on the default 3.3 m link
  std::size_t runs = 1000;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  FrequencyPlan plan;
  Box scan_extent{{0.0, 0.0, 0.0}, {2.0, 0.6, 0.0}};
  Plane scan_plane = Plane::xy;
  double fine_pitch_m = 0.004;
  double coarse_pitch_m = 0.04;
  std::vector<Position> users;
  std::vector<Occluder> occluders;
  ScattererSpec scatterers;
  ArraySpec array;
  Scheme precoder = Scheme::mr;
  std::size_t subcarrier = 512;  // center subcarrier: lambda_sub == lambda
  double noise_power = 0.0;
  bool noise_power_set = false;
  Position target{0.74, 0.4, 0.0};
  Position tx_shift{0.0, 0.0, 0.0};   // phase-stats: user displacement for grid B
  double injected_drift_rad = 0.0;    // phase-stats: synthetic global phase drift
  SounderSpec sounder;
  SweepSpec sweep;
};

// desk-scale defaults (2 m x 0.6 m plane, 16-user line at y = 3.25 m)
ScenarioConfig default_config();

// per-experiment defaults; each is default_config() plus the documented
// scene/grid choices for that experiment
ScenarioConfig aperture_sweep_config();
ScenarioConfig geometry_sweep_config();
ScenarioConfig precoder_compare_config();
ScenarioConfig occlusion_config();
ScenarioConfig wavefront_config();
ScenarioConfig phase_stats_config();

ScenarioConfig load_config_file(const std::string& path);
ScenarioConfig config_from_json_text(const std::string& text);

// canonical serialization of the effective config; basis of config_hash
std::string config_to_json_text(const ScenarioConfig& cfg);
std::string config_hash(const ScenarioConfig& cfg);

ScanPath build_path(const ScenarioConfig& cfg);

// Knife-edge plate for one LoS->NLoS transition stage (plate coverage
// fraction of the user line). Partial stages (0 < fraction < 1) put a
// 0.5 m-tall plate 1 cm in front of the user line spanning the covered
// fraction plus a 3 cm margin: covered users lose every path, uncovered
// users keep all of theirs. fraction >= 1 yields the full-NLoS plate:
// mid-room between scan area and users, 1 m tall, wider than the scene, so
// all direct paths die while elevated scatterers still connect over the
// top. Requires users on a line along x at common y and z.
Occluder occlusion_stage_plate(const ScenarioConfig& cfg, double fraction);

// Builds the scene: occluders verbatim, scatterers placed uniformly in the
// configured region but rejecting positions within lambda/2 of any user or
// of the scan extent box. Deterministic per seed.
Scene build_scene(const ScenarioConfig& cfg);

}  // namespace beamgrid
