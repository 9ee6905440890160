// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "beamgrid/errors.hpp"

namespace beamgrid {

void ReportTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw ConfigError("report row width " + std::to_string(row.size()) +
                      " does not match " + std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

void ReportTable::write_csv(std::ostream& out) const {
  out << "# tool_version=" << tool_version << "\n";
  out << "# config_hash=" << config_hash << "\n";
  out << "# seed=" << seed << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c)
    out << columns[c] << (c + 1 < columns.size() ? "," : "\n");
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      out << format_cell(row[c]) << (c + 1 < row.size() ? "," : "\n");
}

std::string ReportTable::to_csv() const {
  std::ostringstream oss;
  write_csv(oss);
  return oss.str();
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hash_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

}  // namespace beamgrid
