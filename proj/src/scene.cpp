// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/scene.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "beamgrid/errors.hpp"
#include "beamgrid/rng.hpp"

namespace beamgrid {

void Scene::validate() const {
  plan.validate();
  if (users.empty()) throw ConfigError("scene needs at least one user");
  for (const Position& u : users)
    if (!position_finite(u)) throw ConfigError("user position not finite");
  for (std::size_t i = 0; i < users.size(); ++i)
    for (std::size_t j = i + 1; j < users.size(); ++j)
      if (users[i].x == users[j].x && users[i].y == users[j].y && users[i].z == users[j].z)
        throw ConfigError("user positions must be distinct (users " + std::to_string(i) +
                          ", " + std::to_string(j) + ")");
  for (const Occluder& o : occluders) {
    if (!(o.width_m > 0.0) || !(o.height_m > 0.0))
      throw ConfigError("occluder width/height must be positive");
    if (o.normal_axis != 0 && o.normal_axis != 1)
      throw ConfigError("occluder normal axis must be x or y");
  }
  for (const Scatterer& s : scatterers)
    if (std::abs(s.gain) > 1.0 + 1e-12) throw ConfigError("scatterer |gain| must be <= 1");
}

std::complex<double> los_coefficient(const Position& tx, const Position& rx,
                                     double lambda_carrier_m, double lambda_sub_m) {
  const double r = distance(tx, rx);
  if (r == 0.0) throw DegeneracyError("los_coefficient: zero tx-rx distance");
  const double magnitude = lambda_carrier_m / (4.0 * M_PI * r);
  const double phase = 2.0 * M_PI * r / lambda_sub_m;
  return std::polar(magnitude, phase);
}

namespace {

double coord(const Position& p, int axis) {
  return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

// 1-D slab clip of the parameter interval [t0, t1]
bool clip_axis(double a, double d, double lo, double hi, double& t0, double& t1) {
  if (d == 0.0) return a >= lo && a <= hi;
  double ta = (lo - a) / d;
  double tb = (hi - a) / d;
  if (ta > tb) std::swap(ta, tb);
  t0 = std::max(t0, ta);
  t1 = std::min(t1, tb);
  return t0 <= t1;
}

}  // namespace

bool segment_blocked(const Position& a, const Position& b, const Occluder& occ) {
  const int n = occ.normal_axis;
  const int w = 1 - n;  // width axis: the other horizontal axis
  const double an = coord(a, n);
  const double bn = coord(b, n);
  const double cn = coord(occ.center, n);
  const double cw = coord(occ.center, w);
  const double half_w = occ.width_m / 2.0;
  const double half_h = occ.height_m / 2.0;

  if (an == bn) {
    // segment parallel to the plate plane; blocked only if coplanar and
    // overlapping the closed rectangle somewhere strictly inside (a, b)
    if (an != cn) return false;
    double t0 = 0.0;
    double t1 = 1.0;
    if (!clip_axis(coord(a, w), coord(b, w) - coord(a, w), cw - half_w, cw + half_w, t0, t1))
      return false;
    if (!clip_axis(a.z, b.z - a.z, occ.center.z - half_h, occ.center.z + half_h, t0, t1))
      return false;
    return t1 > 0.0 && t0 < 1.0;
  }

  const double t = (cn - an) / (bn - an);
  if (t <= 0.0 || t >= 1.0) return false;  // open segment
  const double pw = coord(a, w) + t * (coord(b, w) - coord(a, w));
  const double pz = a.z + t * (b.z - a.z);
  return std::abs(pw - cw) <= half_w && std::abs(pz - occ.center.z) <= half_h;
}

bool segment_blocked(const Position& a, const Position& b,
                     const std::vector<Occluder>& occluders) {
  for (const Occluder& occ : occluders)
    if (segment_blocked(a, b, occ)) return true;
  return false;
}

namespace {

// Shared two-hop kernel so scene_coefficient and the grid synthesis loop
// produce bit-identical sums.
std::complex<double> bounce_term(const std::complex<double>& gain, double r1, double r2,
                                 double lambda, double lambda_sub) {
  const double total = r1 + r2;
  return gain * std::polar(lambda / (4.0 * M_PI * total), 2.0 * M_PI * total / lambda_sub);
}

}  // namespace

std::complex<double> scene_coefficient(const Scene& scene, std::size_t user_index,
                                       const Position& rx, std::size_t subcarrier) {
  if (user_index >= scene.users.size()) throw ConfigError("user index out of range");
  const Position& tx = scene.users[user_index];
  const double lambda = scene.plan.wavelength_m();
  const double lambda_sub = scene.plan.wavelength_m(subcarrier);

  std::complex<double> h{0.0, 0.0};
  if (!segment_blocked(tx, rx, scene.occluders))
    h = los_coefficient(tx, rx, lambda, lambda_sub);

  for (const Scatterer& sc : scene.scatterers) {
    const double r1 = distance(tx, sc.position);
    const double r2 = distance(sc.position, rx);
    if (r1 == 0.0 || r2 == 0.0)
      throw DegeneracyError("scene_coefficient: scatterer coincides with endpoint");
    if (segment_blocked(tx, sc.position, scene.occluders) ||
        segment_blocked(sc.position, rx, scene.occluders))
      continue;
    h += bounce_term(sc.gain, r1, r2, lambda, lambda_sub);
  }
  return h;
}

std::size_t ChannelGrid::subcarrier_slot(std::size_t plan_index) const {
  for (std::size_t i = 0; i < subcarriers.size(); ++i)
    if (subcarriers[i] == plan_index) return i;
  throw ConfigError("subcarrier " + std::to_string(plan_index) + " not present in grid");
}

ChannelGrid synthesize_grid(const Scene& scene, const ScanPath& path,
                            const std::vector<std::size_t>& subcarriers) {
  scene.validate();
  if (path.points.empty()) throw ConfigError("synthesize_grid: empty scan path");
  if (subcarriers.empty()) throw ConfigError("synthesize_grid: no subcarriers selected");
  for (std::size_t s : subcarriers)
    if (s >= scene.plan.num_subcarriers) throw ConfigError("subcarrier index out of range");

  ChannelGrid grid;
  grid.path = path;
  grid.plan = scene.plan;
  grid.users = scene.users;
  grid.subcarriers = subcarriers;
  grid.coeffs.set_size(path.points.size(), scene.users.size(), subcarriers.size());

  const double lambda = scene.plan.wavelength_m();

  // first legs (user -> scatterer) do not depend on the grid point
  struct FirstLeg {
    double r1;
    bool blocked;
  };
  std::vector<std::vector<FirstLeg>> legs(scene.users.size());
  for (std::size_t n = 0; n < scene.users.size(); ++n) {
    legs[n].reserve(scene.scatterers.size());
    for (const Scatterer& sc : scene.scatterers) {
      const double r1 = distance(scene.users[n], sc.position);
      if (r1 == 0.0) throw DegeneracyError("scatterer coincides with user " + std::to_string(n));
      legs[n].push_back({r1, segment_blocked(scene.users[n], sc.position, scene.occluders)});
    }
  }

  std::vector<double> lambda_sub(subcarriers.size());
  for (std::size_t si = 0; si < subcarriers.size(); ++si)
    lambda_sub[si] = scene.plan.wavelength_m(subcarriers[si]);

  for (std::size_t m = 0; m < path.points.size(); ++m) {
    const Position& rx = path.points[m];
    for (std::size_t n = 0; n < scene.users.size(); ++n) {
      const Position& tx = scene.users[n];
      const double r = distance(tx, rx);
      if (r == 0.0)
        throw DegeneracyError("grid point " + std::to_string(m) + " coincides with user " +
                              std::to_string(n));
      const bool direct = !segment_blocked(tx, rx, scene.occluders);
      for (std::size_t si = 0; si < subcarriers.size(); ++si) {
        std::complex<double> h{0.0, 0.0};
        if (direct) h = los_coefficient(tx, rx, lambda, lambda_sub[si]);
        for (std::size_t sc = 0; sc < scene.scatterers.size(); ++sc) {
          if (legs[n][sc].blocked) continue;
          const Position& sp = scene.scatterers[sc].position;
          const double r2 = distance(sp, rx);
          if (r2 == 0.0)
            throw DegeneracyError("grid point " + std::to_string(m) +
                                  " coincides with scatterer " + std::to_string(sc));
          if (segment_blocked(sp, rx, scene.occluders)) continue;
          h += bounce_term(scene.scatterers[sc].gain, legs[n][sc].r1, r2, lambda,
                           lambda_sub[si]);
        }
        grid.coeffs(m, n, si) = h;
      }
    }
  }
  return grid;
}

ChannelMatrix extract_channel_matrix(const ChannelGrid& grid,
                                     const std::vector<std::size_t>& point_indices,
                                     std::size_t subcarrier) {
  if (point_indices.empty()) throw ConfigError("extract_channel_matrix: no points selected");
  const std::size_t slot = grid.subcarrier_slot(subcarrier);
  for (std::size_t i = 0; i < point_indices.size(); ++i) {
    if (point_indices[i] >= grid.n_points())
      throw ConfigError("point index " + std::to_string(point_indices[i]) + " out of range");
    for (std::size_t j = i + 1; j < point_indices.size(); ++j)
      if (point_indices[i] == point_indices[j])
        throw ConfigError("duplicate point index " + std::to_string(point_indices[i]));
  }

  ChannelMatrix H;
  H.subcarrier = subcarrier;
  H.h.set_size(grid.n_users(), point_indices.size());
  for (std::size_t n = 0; n < grid.n_users(); ++n)
    for (std::size_t m = 0; m < point_indices.size(); ++m)
      H.h(n, m) = grid.coeffs(point_indices[m], n, slot);
  return H;
}

std::vector<Scatterer> place_scatterers(std::size_t count, const Box& region,
                                        double gain_magnitude, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Scatterer> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Scatterer sc;
    sc.position = {rng.uniform(region.lo.x, region.hi.x), rng.uniform(region.lo.y, region.hi.y),
                   rng.uniform(region.lo.z, region.hi.z)};
    sc.gain = std::polar(gain_magnitude, rng.uniform(0.0, 2.0 * M_PI));
    out.push_back(sc);
  }
  return out;
}

}  // namespace beamgrid
