// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/grid_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "beamgrid/errors.hpp"
#include "beamgrid/report.hpp"

namespace beamgrid {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader = "point_index,x_m,y_m,z_m,user,subcarrier,re,im";

json meta_to_json(const ChannelGrid& grid) {
  json users = json::array();
  for (const Position& u : grid.users) users.push_back({u.x, u.y, u.z});
  return json{{"format_version", kGridFormatVersion},
              {"carrier_frequency_hz", grid.plan.carrier_frequency_hz},
              {"bandwidth_hz", grid.plan.bandwidth_hz},
              {"num_subcarriers", grid.plan.num_subcarriers},
              {"used_fraction", grid.plan.used_fraction},
              {"users", users},
              {"scan",
               {{"plane", to_string(grid.path.plane)},
                {"fine_pitch_m", grid.path.fine_pitch_m},
                {"coarse_pitch_m", grid.path.coarse_pitch_m}}},
              {"point_count", grid.n_points()},
              {"subcarriers", grid.subcarriers}};
}

double parse_double(const std::string& field, const std::string& context) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0')
    throw IoError("grid csv: unparsable number '" + field + "' in " + context);
  return v;
}

}  // namespace

void export_grid(const ChannelGrid& grid, const std::string& path_prefix) {
  {
    std::ofstream meta(path_prefix + ".meta.json");
    if (!meta) throw IoError("cannot write " + path_prefix + ".meta.json");
    meta << meta_to_json(grid).dump(2) << "\n";
  }
  std::ofstream csv(path_prefix + ".grid.csv");
  if (!csv) throw IoError("cannot write " + path_prefix + ".grid.csv");
  csv << kCsvHeader << "\n";
  for (std::size_t m = 0; m < grid.n_points(); ++m) {
    const Position& p = grid.path.points[m];
    for (std::size_t n = 0; n < grid.n_users(); ++n) {
      for (std::size_t si = 0; si < grid.n_slots(); ++si) {
        const std::complex<double> c = grid.coeffs(m, n, si);
        csv << m << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
            << format_double(p.z) << ',' << n << ',' << grid.subcarriers[si] << ','
            << format_double(c.real()) << ',' << format_double(c.imag()) << "\n";
      }
    }
  }
  if (!csv) throw IoError("write failed on " + path_prefix + ".grid.csv");
}

ChannelGrid import_grid(const std::string& path_prefix) {
  const std::string meta_path = path_prefix + ".meta.json";
  const std::string csv_path = path_prefix + ".grid.csv";

  std::ifstream meta_in(meta_path);
  if (!meta_in) throw IoError("cannot open " + meta_path);
  json meta;
  try {
    meta_in >> meta;
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + meta_path + ": " + e.what());
  }

  ChannelGrid grid;
  try {
    const int version = meta.at("format_version").get<int>();
    if (version != kGridFormatVersion)
      throw IoError("unknown grid format version " + std::to_string(version));
    grid.plan.carrier_frequency_hz = meta.at("carrier_frequency_hz").get<double>();
    grid.plan.bandwidth_hz = meta.at("bandwidth_hz").get<double>();
    grid.plan.num_subcarriers = meta.at("num_subcarriers").get<std::size_t>();
    grid.plan.used_fraction = meta.value("used_fraction", 1.0);
    for (const auto& u : meta.at("users"))
      grid.users.push_back({u.at(0).get<double>(), u.at(1).get<double>(), u.at(2).get<double>()});
    grid.path.plane = plane_from_string(meta.at("scan").at("plane").get<std::string>());
    grid.path.fine_pitch_m = meta.at("scan").at("fine_pitch_m").get<double>();
    grid.path.coarse_pitch_m = meta.at("scan").at("coarse_pitch_m").get<double>();
    grid.subcarriers = meta.at("subcarriers").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw IoError("malformed " + meta_path + ": " + e.what());
  }
  const auto point_count = meta.at("point_count").get<std::size_t>();
  if (grid.users.empty()) throw IoError(meta_path + ": no users");
  if (grid.subcarriers.empty()) throw IoError(meta_path + ": no subcarriers");
  if (point_count == 0) throw IoError(meta_path + ": zero point count");

  std::ifstream csv(csv_path);
  if (!csv) throw IoError("cannot open " + csv_path);
  std::string line;
  if (!std::getline(csv, line) || line != kCsvHeader)
    throw IoError(csv_path + ": bad header row (expected '" + std::string(kCsvHeader) + "')");

  grid.path.points.resize(point_count);
  grid.coeffs.set_size(point_count, grid.users.size(), grid.subcarriers.size());

  const std::size_t expected_rows = point_count * grid.users.size() * grid.subcarriers.size();
  std::size_t row_index = 0;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    if (row_index >= expected_rows)
      throw IoError(csv_path + ": expected " + std::to_string(expected_rows) +
                    " data rows, found more");
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 8)
      throw IoError(csv_path + ": row " + std::to_string(row_index + 1) + " has " +
                    std::to_string(fields.size()) + " fields, expected 8");

    const std::string ctx = "row " + std::to_string(row_index + 1);
    // row order is pinned: point-major, then user, then subcarrier
    const std::size_t m = row_index / (grid.users.size() * grid.subcarriers.size());
    const std::size_t rem = row_index % (grid.users.size() * grid.subcarriers.size());
    const std::size_t n = rem / grid.subcarriers.size();
    const std::size_t si = rem % grid.subcarriers.size();

    if (parse_double(fields[0], ctx) != static_cast<double>(m))
      throw IoError(csv_path + ": " + ctx + " point_index out of order");
    if (parse_double(fields[4], ctx) != static_cast<double>(n))
      throw IoError(csv_path + ": " + ctx + " user out of order");
    if (parse_double(fields[5], ctx) != static_cast<double>(grid.subcarriers[si]))
      throw IoError(csv_path + ": " + ctx + " subcarrier out of order");

    const Position p{parse_double(fields[1], ctx), parse_double(fields[2], ctx),
                     parse_double(fields[3], ctx)};
    const double re = parse_double(fields[6], ctx);
    const double im = parse_double(fields[7], ctx);
    if (!position_finite(p) || !std::isfinite(re) || !std::isfinite(im))
      throw IoError(csv_path + ": " + ctx + " has non-finite values");

    if (n == 0 && si == 0) {
      grid.path.points[m] = p;
    } else {
      const Position& q = grid.path.points[m];
      if (p.x != q.x || p.y != q.y || p.z != q.z)
        throw IoError(csv_path + ": " + ctx + " position disagrees with point " +
                      std::to_string(m));
    }
    grid.coeffs(m, n, si) = {re, im};
    ++row_index;
  }
  if (row_index != expected_rows)
    throw IoError(csv_path + ": expected " + std::to_string(expected_rows) +
                  " data rows, found " + std::to_string(row_index));
  return grid;
}

}  // namespace beamgrid
