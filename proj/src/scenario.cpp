// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "beamgrid/errors.hpp"
#include "beamgrid/report.hpp"
#include "beamgrid/rng.hpp"

namespace beamgrid {

namespace {

using nlohmann::json;

std::vector<Position> user_line(std::size_t count, const Position& from, const Position& to) {
  std::vector<Position> users;
  users.reserve(count);
  if (count == 1) {
    users.push_back(from);
    return users;
  }
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    users.push_back({from.x + t * (to.x - from.x), from.y + t * (to.y - from.y),
                     from.z + t * (to.z - from.z)});
  }
  return users;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (allowed.find(key) == allowed.end())
      throw ConfigError("unknown config key '" + key + "' in " + where);
  }
}

Position parse_position(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(where + " must be a [x, y, z] array");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::pair<double, double> parse_range(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(where + " must be a [lo, hi] array");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Box parse_box(const json& j, const std::string& where) {
  reject_unknown_keys(j, {"x", "y", "z"}, where);
  Box box;
  const auto [xlo, xhi] = parse_range(j.at("x"), where + ".x");
  const auto [ylo, yhi] = parse_range(j.at("y"), where + ".y");
  double zlo = 0.0;
  double zhi = 0.0;
  if (j.contains("z")) std::tie(zlo, zhi) = parse_range(j.at("z"), where + ".z");
  box.lo = {xlo, ylo, zlo};
  box.hi = {xhi, yhi, zhi};
  return box;
}

json box_to_json(const Box& box) {
  return json{{"x", {box.lo.x, box.hi.x}}, {"y", {box.lo.y, box.hi.y}},
              {"z", {box.lo.z, box.hi.z}}};
}

json position_to_json(const Position& p) { return json::array({p.x, p.y, p.z}); }

}  // namespace

ScenarioConfig default_config() {
  ScenarioConfig cfg;
  cfg.users = user_line(16, {0.0, 3.25, 0.0}, {2.0, 3.25, 0.0});
  cfg.scatterers.region = {{-2.0, 0.7, 0.9}, {4.0, 1.8, 1.9}};
  cfg.array.center = cfg.scan_extent.center();
  cfg.sweep.apertures_m2 = {0.0002, 0.001, 0.0025, 0.005, 0.01,
                          0.02,   0.04,  0.09,   0.16,  0.25, 0.36};
  cfg.sweep.antenna_counts = {9, 16, 25};
  cfg.sweep.geometries = {GeometryKind::line_x, GeometryKind::line_y, GeometryKind::square,
                          GeometryKind::cross, GeometryKind::circle, GeometryKind::random};
  cfg.sweep.occlusion_stages = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
  cfg.sweep.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  return cfg;
}

ScenarioConfig aperture_sweep_config() {
  // lattice rows of the smallest apertures need a finer line pitch than 4 cm
  ScenarioConfig cfg = default_config();
  cfg.coarse_pitch_m = 0.01;
  // reverberant-room stand-in: strong wall-like clutter from all azimuths,
  // so the field decorrelates at lambda/2 element spacing as measured
  cfg.scatterers.count = 384;
  cfg.scatterers.gain_magnitude = 0.65;
  cfg.scatterers.placement = ScattererPlacement::sphere;
  return cfg;
}

ScenarioConfig geometry_sweep_config() {
  // full 2 m x 2 m area with moderate ambient clutter: the user line sits
  // in the Fresnel zone of the maximum aperture and the line orderings
  // stay LoS-driven while the 2-D geometries pick up diversity
  ScenarioConfig cfg = default_config();
  cfg.seed = 4;
  cfg.scan_extent = {{0.0, 0.0, 0.0}, {2.0, 2.0, 0.0}};
  cfg.coarse_pitch_m = 0.01;
  cfg.array.center = cfg.scan_extent.center();
  cfg.array.aperture_set = false;  // use the max square inside the extent
  cfg.scatterers.count = 128;
  cfg.scatterers.gain_magnitude = 0.4;
  cfg.scatterers.placement = ScattererPlacement::sphere;
  cfg.scatterers.ring_radius_min_m = 2.8;
  cfg.scatterers.ring_radius_max_m = 4.5;
  cfg.target = {0.74, 0.4, 0.0};
  return cfg;
}

namespace {

// Full-NLoS plate: between the scan area and the user line, a quarter of
// the way out from the area, 0.6 m tall and wider than the scene, so every
// direct path dies while the default clutter still connects users and area
// over the top.
Occluder full_stage_plate(const ScenarioConfig& cfg) {
  double user_y_min = cfg.users.front().y;
  double user_z = cfg.users.front().z;
  double x_lo = cfg.scan_extent.lo.x;
  double x_hi = cfg.scan_extent.hi.x;
  for (const Position& u : cfg.users) {
    user_y_min = std::min(user_y_min, u.y);
    x_lo = std::min(x_lo, u.x);
    x_hi = std::max(x_hi, u.x);
  }
  const double area_edge = cfg.scan_extent.hi.y;
  Occluder plate;
  plate.normal_axis = 1;
  plate.center = {(x_lo + x_hi) / 2.0, area_edge + 0.25 * (user_y_min - area_edge), user_z};
  plate.width_m = (x_hi - x_lo) + 2.0;
  plate.height_m = 0.6;
  return plate;
}

}  // namespace

ScenarioConfig precoder_compare_config() {
  ScenarioConfig cfg = default_config();
  cfg.coarse_pitch_m = 0.01;
  cfg.scatterers.count = 64;
  cfg.occluders = {full_stage_plate(cfg)};
  cfg.sweep.antenna_counts = {25, 36, 49};
  cfg.array.aperture_set = false;
  // ~2-3 orders below typical MR received power in this scene: MR/PO stay
  // interference-limited, ZF high but finite
  cfg.noise_power = 1e-12;
  cfg.noise_power_set = true;
  return cfg;
}

ScenarioConfig occlusion_config() {
  // full 2 m x 2 m area: the LoS beam ridge leaks across the whole area
  // while the rich NLoS field decorrelates, as in the measured transition
  ScenarioConfig cfg = default_config();
  cfg.scan_extent = {{0.0, 0.0, 0.0}, {2.0, 2.0, 0.0}};
  cfg.array.center = cfg.scan_extent.center();
  cfg.scatterers.count = 128;
  cfg.scatterers.gain_magnitude = 0.10;
  return cfg;
}

ScenarioConfig wavefront_config() {
  ScenarioConfig cfg = default_config();
  // single tx collinear with the scan line y = 0.28, left of the grid, at
  // scan height: rings cross the lines radially
  cfg.users = {{-0.5, 0.28, 0.0}};
  return cfg;
}

ScenarioConfig phase_stats_config() {
  ScenarioConfig cfg = default_config();
  cfg.scan_extent = {{0.0, 0.0, 0.0}, {1.6, 0.32, 0.0}};
  cfg.fine_pitch_m = 0.008;
  cfg.users = {{0.8, 3.25, 0.0}};
  cfg.scatterers.count = 48;
  cfg.occluders = {full_stage_plate(cfg)};
  cfg.tx_shift = {cfg.plan.wavelength_m(), 0.0, 0.0};
  cfg.array.center = cfg.scan_extent.center();
  return cfg;
}

namespace {

void apply_json(ScenarioConfig& cfg, const json& root) {
  reject_unknown_keys(root,
                      {"seed", "plan", "scan", "users", "occluders", "scatterers", "array",
                       "precoder", "subcarrier", "noise_power", "target", "tx_shift_m",
                       "injected_drift_rad", "sounder", "sweep"},
                      "config root");

  if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();

  if (root.contains("plan")) {
    const json& p = root.at("plan");
    reject_unknown_keys(
        p, {"carrier_frequency_hz", "bandwidth_hz", "num_subcarriers", "used_fraction"},
        "plan");
    if (p.contains("carrier_frequency_hz"))
      cfg.plan.carrier_frequency_hz = p.at("carrier_frequency_hz").get<double>();
    if (p.contains("bandwidth_hz")) cfg.plan.bandwidth_hz = p.at("bandwidth_hz").get<double>();
    if (p.contains("num_subcarriers"))
      cfg.plan.num_subcarriers = p.at("num_subcarriers").get<std::size_t>();
    if (p.contains("used_fraction")) cfg.plan.used_fraction = p.at("used_fraction").get<double>();
  }

  if (root.contains("scan")) {
    const json& s = root.at("scan");
    reject_unknown_keys(s, {"plane", "extent", "fine_pitch_m", "coarse_pitch_m"}, "scan");
    if (s.contains("plane")) cfg.scan_plane = plane_from_string(s.at("plane").get<std::string>());
    if (s.contains("extent")) cfg.scan_extent = parse_box(s.at("extent"), "scan.extent");
    if (s.contains("fine_pitch_m")) cfg.fine_pitch_m = s.at("fine_pitch_m").get<double>();
    if (s.contains("coarse_pitch_m")) cfg.coarse_pitch_m = s.at("coarse_pitch_m").get<double>();
    if (!cfg.array.center_set) cfg.array.center = cfg.scan_extent.center();
  }

  if (root.contains("users")) {
    const json& u = root.at("users");
    cfg.users.clear();
    if (u.is_array()) {
      for (const auto& entry : u) cfg.users.push_back(parse_position(entry, "users[]"));
    } else {
      reject_unknown_keys(u, {"count", "from", "to"}, "users");
      cfg.users = user_line(u.at("count").get<std::size_t>(),
                            parse_position(u.at("from"), "users.from"),
                            parse_position(u.at("to"), "users.to"));
    }
  }

  if (root.contains("occluders")) {
    cfg.occluders.clear();
    for (const auto& o : root.at("occluders")) {
      reject_unknown_keys(o, {"center", "width_m", "height_m", "normal"}, "occluders[]");
      Occluder occ;
      occ.center = parse_position(o.at("center"), "occluder.center");
      occ.width_m = o.at("width_m").get<double>();
      occ.height_m = o.at("height_m").get<double>();
      const std::string normal = o.value("normal", "y");
      if (normal == "x")
        occ.normal_axis = 0;
      else if (normal == "y")
        occ.normal_axis = 1;
      else
        throw ConfigError("occluder normal must be 'x' or 'y'");
      cfg.occluders.push_back(occ);
    }
  }

  if (root.contains("scatterers")) {
    const json& s = root.at("scatterers");
    reject_unknown_keys(s, {"count", "gain_magnitude", "placement", "region", "ring", "seed"},
                        "scatterers");
    if (s.contains("count")) cfg.scatterers.count = s.at("count").get<std::size_t>();
    if (s.contains("gain_magnitude"))
      cfg.scatterers.gain_magnitude = s.at("gain_magnitude").get<double>();
    if (s.contains("placement")) {
      const std::string p = s.at("placement").get<std::string>();
      if (p == "box")
        cfg.scatterers.placement = ScattererPlacement::box;
      else if (p == "ring")
        cfg.scatterers.placement = ScattererPlacement::ring;
      else if (p == "sphere")
        cfg.scatterers.placement = ScattererPlacement::sphere;
      else
        throw ConfigError("scatterers.placement must be 'box', 'ring' or 'sphere'");
    }
    if (s.contains("region")) {
      cfg.scatterers.region = parse_box(s.at("region"), "scatterers.region");
      cfg.scatterers.region_set = true;
    }
    if (s.contains("ring")) {
      const json& r = s.at("ring");
      reject_unknown_keys(r, {"center", "radius_m", "z_m"}, "scatterers.ring");
      if (r.contains("center")) {
        cfg.scatterers.ring_center = parse_position(r.at("center"), "scatterers.ring.center");
        cfg.scatterers.ring_center_set = true;
      }
      if (r.contains("radius_m")) {
        std::tie(cfg.scatterers.ring_radius_min_m, cfg.scatterers.ring_radius_max_m) =
            parse_range(r.at("radius_m"), "scatterers.ring.radius_m");
      }
      if (r.contains("z_m")) {
        std::tie(cfg.scatterers.ring_z_min_m, cfg.scatterers.ring_z_max_m) =
            parse_range(r.at("z_m"), "scatterers.ring.z_m");
      }
    }
    if (s.contains("seed")) {
      cfg.scatterers.seed = s.at("seed").get<std::uint64_t>();
      cfg.scatterers.seed_set = true;
    }
  }

  if (root.contains("array")) {
    const json& a = root.at("array");
    reject_unknown_keys(a, {"kind", "count", "aperture_m2", "center", "plane"}, "array");
    if (a.contains("kind"))
      cfg.array.kind = geometry_kind_from_string(a.at("kind").get<std::string>());
    if (a.contains("count")) cfg.array.count = a.at("count").get<std::size_t>();
    if (a.contains("aperture_m2")) {
      cfg.array.aperture_m2 = a.at("aperture_m2").get<double>();
      cfg.array.aperture_set = true;
    }
    if (a.contains("center")) {
      cfg.array.center = parse_position(a.at("center"), "array.center");
      cfg.array.center_set = true;
    }
    if (a.contains("plane")) {
      const Plane p = plane_from_string(a.at("plane").get<std::string>());
      if (p == Plane::volume) throw ConfigError("array plane must be xy or xz");
      cfg.array.plane = p;
    }
  }

  if (root.contains("precoder"))
    cfg.precoder = scheme_from_string(root.at("precoder").get<std::string>());
  if (root.contains("subcarrier")) cfg.subcarrier = root.at("subcarrier").get<std::size_t>();
  if (root.contains("noise_power")) {
    cfg.noise_power = root.at("noise_power").get<double>();
    cfg.noise_power_set = true;
  }
  if (root.contains("target")) cfg.target = parse_position(root.at("target"), "target");
  if (root.contains("tx_shift_m"))
    cfg.tx_shift = parse_position(root.at("tx_shift_m"), "tx_shift_m");
  if (root.contains("injected_drift_rad"))
    cfg.injected_drift_rad = root.at("injected_drift_rad").get<double>();

  if (root.contains("sounder")) {
    const json& s = root.at("sounder");
    reject_unknown_keys(
        s, {"symbols_per_packet", "cp_fraction", "snr_floor_db", "noise_power", "runs"},
        "sounder");
    if (s.contains("symbols_per_packet"))
      cfg.sounder.symbols_per_packet = s.at("symbols_per_packet").get<std::size_t>();
    if (s.contains("cp_fraction")) cfg.sounder.cp_fraction = s.at("cp_fraction").get<double>();
    if (s.contains("snr_floor_db"))
      cfg.sounder.snr_floor_db = s.at("snr_floor_db").get<double>();
    if (s.contains("noise_power")) cfg.sounder.noise_power = s.at("noise_power").get<double>();
    if (s.contains("runs")) cfg.sounder.runs = s.at("runs").get<std::size_t>();
  }

  if (root.contains("sweep")) {
    const json& s = root.at("sweep");
    reject_unknown_keys(s,
                        {"apertures_m2", "antenna_counts", "geometries", "occlusion_stages",
                         "random_trials", "random_seed", "seeds"},
                        "sweep");
    if (s.contains("apertures_m2"))
      cfg.sweep.apertures_m2 = s.at("apertures_m2").get<std::vector<double>>();
    if (s.contains("antenna_counts"))
      cfg.sweep.antenna_counts = s.at("antenna_counts").get<std::vector<std::size_t>>();
    if (s.contains("geometries")) {
      cfg.sweep.geometries.clear();
      for (const auto& g : s.at("geometries"))
        cfg.sweep.geometries.push_back(geometry_kind_from_string(g.get<std::string>()));
    }
    if (s.contains("occlusion_stages"))
      cfg.sweep.occlusion_stages = s.at("occlusion_stages").get<std::vector<double>>();
    if (s.contains("random_trials"))
      cfg.sweep.random_trials = s.at("random_trials").get<std::size_t>();
    if (s.contains("random_seed"))
      cfg.sweep.random_seed = s.at("random_seed").get<std::uint64_t>();
    if (s.contains("seeds")) cfg.sweep.seeds = s.at("seeds").get<std::vector<std::uint64_t>>();
  }
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ScenarioConfig cfg = default_config();
  try {
    apply_json(cfg, root);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  cfg.plan.validate();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream oss;
  oss << in.rdbuf();
  return config_from_json_text(oss.str());
}

std::string config_to_json_text(const ScenarioConfig& cfg) {
  json users = json::array();
  for (const Position& u : cfg.users) users.push_back(position_to_json(u));
  json occluders = json::array();
  for (const Occluder& o : cfg.occluders)
    occluders.push_back({{"center", position_to_json(o.center)},
                         {"width_m", o.width_m},
                         {"height_m", o.height_m},
                         {"normal", o.normal_axis == 0 ? "x" : "y"}});
  json geometries = json::array();
  for (GeometryKind g : cfg.sweep.geometries) geometries.push_back(to_string(g));

  json root{
      {"seed", cfg.seed},
      {"plan",
       {{"carrier_frequency_hz", cfg.plan.carrier_frequency_hz},
        {"bandwidth_hz", cfg.plan.bandwidth_hz},
        {"num_subcarriers", cfg.plan.num_subcarriers},
        {"used_fraction", cfg.plan.used_fraction}}},
      {"scan",
       {{"plane", to_string(cfg.scan_plane)},
        {"extent", box_to_json(cfg.scan_extent)},
        {"fine_pitch_m", cfg.fine_pitch_m},
        {"coarse_pitch_m", cfg.coarse_pitch_m}}},
      {"users", users},
      {"occluders", occluders},
      {"scatterers",
       {{"count", cfg.scatterers.count},
        {"gain_magnitude", cfg.scatterers.gain_magnitude},
        {"placement",
         cfg.scatterers.placement == ScattererPlacement::ring
             ? "ring"
             : (cfg.scatterers.placement == ScattererPlacement::sphere ? "sphere" : "box")},
        {"region", box_to_json(cfg.scatterers.region)},
        {"ring",
         {{"center", position_to_json(cfg.scatterers.ring_center)},
          {"center_set", cfg.scatterers.ring_center_set},
          {"radius_m", {cfg.scatterers.ring_radius_min_m, cfg.scatterers.ring_radius_max_m}},
          {"z_m", {cfg.scatterers.ring_z_min_m, cfg.scatterers.ring_z_max_m}}}},
        {"seed", cfg.scatterers.seed_set ? json(cfg.scatterers.seed) : json()}}},
      {"array",
       {{"kind", to_string(cfg.array.kind)},
        {"count", cfg.array.count},
        {"aperture_m2", cfg.array.aperture_set ? json(cfg.array.aperture_m2) : json()},
        {"center", position_to_json(cfg.array.center)},
        {"plane", to_string(cfg.array.plane)}}},
      {"precoder", to_string(cfg.precoder)},
      {"subcarrier", cfg.subcarrier},
      {"noise_power", cfg.noise_power_set ? json(cfg.noise_power) : json()},
      {"target", position_to_json(cfg.target)},
      {"tx_shift_m", position_to_json(cfg.tx_shift)},
      {"injected_drift_rad", cfg.injected_drift_rad},
      {"sounder",
       {{"symbols_per_packet", cfg.sounder.symbols_per_packet},
        {"cp_fraction", cfg.sounder.cp_fraction},
        {"snr_floor_db", cfg.sounder.snr_floor_db},
        {"noise_power", cfg.sounder.noise_power},
        {"runs", cfg.sounder.runs}}},
      {"sweep",
       {{"apertures_m2", cfg.sweep.apertures_m2},
        {"antenna_counts", cfg.sweep.antenna_counts},
        {"geometries", geometries},
        {"occlusion_stages", cfg.sweep.occlusion_stages},
        {"random_trials", cfg.sweep.random_trials},
        {"random_seed", cfg.sweep.random_seed},
        {"seeds", cfg.sweep.seeds}}}};
  return root.dump(2);
}

std::string config_hash(const ScenarioConfig& cfg) {
  return hash_hex(config_to_json_text(cfg));
}

ScanPath build_path(const ScenarioConfig& cfg) {
  return meander_path(cfg.scan_extent, cfg.scan_plane, cfg.fine_pitch_m, cfg.coarse_pitch_m);
}

Occluder occlusion_stage_plate(const ScenarioConfig& cfg, double fraction) {
  if (cfg.users.empty()) throw ConfigError("occlusion stage needs users");
  if (!(fraction > 0.0)) throw ConfigError("occlusion stage fraction must be positive");
  if (fraction >= 1.0) return full_stage_plate(cfg);

  const double user_y = cfg.users.front().y;
  const double user_z = cfg.users.front().z;
  double x_lo = cfg.users.front().x;
  double x_hi = cfg.users.front().x;
  for (const Position& u : cfg.users) {
    if (u.y != user_y || u.z != user_z)
      throw ConfigError("occlusion stages require users on an x-line at common y and z");
    x_lo = std::min(x_lo, u.x);
    x_hi = std::max(x_hi, u.x);
  }
  const double covered_hi = x_lo + fraction * (x_hi - x_lo);
  // plate sits 1 cm toward the scan area
  const double direction = cfg.scan_extent.center().y < user_y ? -1.0 : 1.0;
  constexpr double kStandoff = 0.01;
  constexpr double kMargin = 0.05;

  Occluder plate;
  plate.normal_axis = 1;
  plate.center = {(x_lo - kMargin + covered_hi + kMargin) / 2.0, user_y + direction * kStandoff,
                  user_z};
  plate.width_m = (covered_hi - x_lo) + 2.0 * kMargin;
  plate.height_m = 0.5;
  return plate;
}

Scene build_scene(const ScenarioConfig& cfg) {
  Scene scene;
  scene.users = cfg.users;
  scene.plan = cfg.plan;
  scene.occluders = cfg.occluders;
  scene.seed = cfg.seed;

  if (cfg.scatterers.count > 0) {
    const std::uint64_t seed =
        cfg.scatterers.seed_set ? cfg.scatterers.seed : derive_seed(cfg.seed, 0x5ca7);
    const double clearance = cfg.plan.wavelength_m() / 2.0;
    Rng rng(seed);
    constexpr std::size_t kAttempts = 10000;
    const ScattererSpec& spec = cfg.scatterers;

    Position ring_center = spec.ring_center;
    if (spec.placement == ScattererPlacement::ring && !spec.ring_center_set) {
      Position centroid{0.0, 0.0, 0.0};
      for (const Position& u : scene.users) {
        centroid.x += u.x;
        centroid.y += u.y;
        centroid.z += u.z;
      }
      const double n = static_cast<double>(scene.users.size());
      const Position area = cfg.scan_extent.center();
      ring_center = {(centroid.x / n + area.x) / 2.0, (centroid.y / n + area.y) / 2.0, 0.0};
    }

    while (scene.scatterers.size() < cfg.scatterers.count) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
        Position p;
        if (spec.placement == ScattererPlacement::ring) {
          const double az = rng.uniform(0.0, 2.0 * M_PI);
          const double r = rng.uniform(spec.ring_radius_min_m, spec.ring_radius_max_m);
          p = {ring_center.x + r * std::cos(az), ring_center.y + r * std::sin(az),
               rng.uniform(spec.ring_z_min_m, spec.ring_z_max_m)};
        } else if (spec.placement == ScattererPlacement::sphere) {
          const double az = rng.uniform(0.0, 2.0 * M_PI);
          const double cz = rng.uniform(-1.0, 1.0);
          const double sz = std::sqrt(1.0 - cz * cz);
          const double r = rng.uniform(spec.ring_radius_min_m, spec.ring_radius_max_m);
          p = {ring_center.x + r * sz * std::cos(az), ring_center.y + r * sz * std::sin(az),
               ring_center.z + r * cz};
        } else {
          p = {rng.uniform(spec.region.lo.x, spec.region.hi.x),
               rng.uniform(spec.region.lo.y, spec.region.hi.y),
               rng.uniform(spec.region.lo.z, spec.region.hi.z)};
        }
        bool ok = !cfg.scan_extent.contains(p, clearance);
        for (const Position& u : scene.users) {
          if (!ok) break;
          if (distance(p, u) < clearance) ok = false;
        }
        if (!ok) continue;
        Scatterer sc;
        sc.position = p;
        sc.gain = std::polar(spec.gain_magnitude, rng.uniform(0.0, 2.0 * M_PI));
        scene.scatterers.push_back(sc);
        placed = true;
        break;
      }
      if (!placed)
        throw DegeneracyError(
            "scatterer placement leaves no room outside the lambda/2 clearance zones");
    }
  }
  scene.validate();
  return scene;
}

}  // namespace beamgrid
