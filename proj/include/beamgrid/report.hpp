// SPDX-License-Identifier: Apache-2.0
//
// Experiment output tables: typed rows, provenance header, deterministic
// CSV serialization (identical config => byte-identical output).

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace beamgrid {

inline constexpr const char* kToolVersion = "beamgrid 0.1.0";

using Cell = std::variant<std::int64_t, double, std::string>;

struct ReportTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string config_hash;  // 16 hex digits
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;

  void add_row(std::vector<Cell> row);
  void write_csv(std::ostream& out) const;
  std::string to_csv() const;
};

// shortest exact decimal for doubles is not stable across libc versions;
// %.17g round-trips IEEE doubles and is deterministic
std::string format_double(double v);
std::string format_cell(const Cell& cell);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::string_view bytes);

}  // namespace beamgrid
