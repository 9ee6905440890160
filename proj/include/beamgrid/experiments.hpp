// SPDX-License-Identifier: Apache-2.0
//
// Experiment runners: aperture sweep, geometry sweep, precoder comparison,
// LoS->NLoS occlusion transition. Runners compose the other modules' pure
// operations; fixed configs give byte-identical tables.

#pragma once

#include <armadillo>
#include <cstddef>
#include <vector>

#include "beamgrid/metrics.hpp"
#include "beamgrid/report.hpp"
#include "beamgrid/scenario.hpp"

namespace beamgrid {

// sum rate of one antenna selection cut from the grid
double selection_sum_rate(const ChannelGrid& grid,
                          const std::vector<std::size_t>& point_indices, Scheme scheme,
                          std::size_t subcarrier, double noise_power);

// Fig. 10 family: sum rate of a square array vs aperture, with a 5th/95th
// percentile band over seeded lambda/2-constrained random geometries drawn
// from the full scan area.
ReportTable run_aperture_sweep(const ScenarioConfig& cfg);

// Fig. 11/12 family: sum rate per geometry and antenna count at the common
// maximum aperture. Counts incompatible with a geometry produce a note row.
ReportTable run_geometry_sweep(const ScenarioConfig& cfg);

// Fig. 13 family: mr/po/zf sum rates over square arrays; requires an
// explicit positive noise_power. M == N zf rows are skipped with a note.
ReportTable run_precoder_compare(const ScenarioConfig& cfg);

struct OcclusionStage {
  double fraction = 0.0;
  bool degenerate = false;  // zero channel at the target (no scatterers, full plate)
  SpatialSirReport sir;
  EnergyMap map;  // normalized to the LoS-stage maximum
  arma::vec per_antenna_energy;
  std::vector<bool> shadowed;  // per precoding antenna (scene user)
  double unshadowed_energy_fraction = 1.0;
};

struct OcclusionResult {
  ReportTable table;
  std::vector<OcclusionStage> stages;
  ScanPath path;
  std::size_t target_index = 0;
};

// Fig. 7/8 family: per occlusion stage the spatial SIR at the target, the
// energy map against the LoS reference, and the MR per-antenna energy split.
OcclusionResult run_occlusion_transition(const ScenarioConfig& cfg);

}  // namespace beamgrid
