// SPDX-License-Identifier: Apache-2.0
//
// beamgrid -- spatial channel-grid simulation and massive MIMO precoding analysis

#pragma once

#include <stdexcept>
#include <string>

namespace beamgrid {

// Error classes map 1:1 onto CLI exit codes (see tools/): config 2,
// numerical degeneracy 3, I/O 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitIo = 4;

}  // namespace beamgrid
