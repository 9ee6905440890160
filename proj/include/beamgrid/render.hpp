// SPDX-License-Identifier: Apache-2.0
//
// Quick-look PNG renderings of CSV artifacts: grayscale heatmaps for area
// maps, polyline charts for sweeps. The CSV files are the contract; these
// are optional visual aids.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beamgrid/scanpath.hpp"

namespace beamgrid {

void write_grayscale_png(const std::string& file, std::size_t width, std::size_t height,
                         const std::vector<std::uint8_t>& pixels);

// one value per grid point, reshaped via the scan lines; plane scans only.
// Values below (max - floor_range) clamp to black.
void render_heatmap_png(const ScanPath& path, const std::vector<double>& values,
                        const std::string& file, double floor_range = 60.0);

struct ChartSeries {
  std::vector<double> x;
  std::vector<double> y;
};

// minimal line chart: axes plus one gray-shaded polyline per series
void render_chart_png(const std::vector<ChartSeries>& series, const std::string& file);

}  // namespace beamgrid
