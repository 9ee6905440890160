// SPDX-License-Identifier: Apache-2.0
//
// Channel-grid persistence: <prefix>.meta.json + <prefix>.grid.csv with
// point-major, then user, then subcarrier row order and 17-significant-digit
// floats (lossless double round trip).

#pragma once

#include <string>

#include "beamgrid/scene.hpp"

namespace beamgrid {

inline constexpr int kGridFormatVersion = 1;

void export_grid(const ChannelGrid& grid, const std::string& path_prefix);
ChannelGrid import_grid(const std::string& path_prefix);

}  // namespace beamgrid
