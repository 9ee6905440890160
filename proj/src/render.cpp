// SPDX-License-Identifier: Apache-2.0

#include "beamgrid/render.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "beamgrid/errors.hpp"

namespace beamgrid {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

void write_grayscale_png(const std::string& file, std::size_t width, std::size_t height,
                         const std::vector<std::uint8_t>& pixels) {
  if (width == 0 || height == 0 || pixels.size() != width * height)
    throw IoError("png: pixel buffer does not match dimensions");

  // raw scanlines with filter byte 0
  std::vector<std::uint8_t> raw;
  raw.reserve(height * (width + 1));
  for (std::size_t row = 0; row < height; ++row) {
    raw.push_back(0);
    raw.insert(raw.end(), pixels.begin() + static_cast<long>(row * width),
               pixels.begin() + static_cast<long>((row + 1) * width));
  }
  uLongf compressed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(compressed_size);
  if (compress2(compressed.data(), &compressed_size, raw.data(),
                static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw IoError("png: deflate failed");
  compressed.resize(compressed_size);

  std::vector<std::uint8_t> png{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(width));
  put_u32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // grayscale
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", compressed);
  put_chunk(png, "IEND", {});

  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write " + file);
  out.write(reinterpret_cast<const char*>(png.data()), static_cast<long>(png.size()));
  if (!out) throw IoError("write failed on " + file);
}

void render_heatmap_png(const ScanPath& path, const std::vector<double>& values,
                        const std::string& file, double floor_range) {
  if (path.plane == Plane::volume)
    throw ConfigError("png heatmaps support plane scans only");
  if (values.size() != path.points.size())
    throw ConfigError("heatmap: one value per grid point required");

  const auto lines = scan_lines(path);
  const std::size_t cols = lines.empty() ? 0 : lines[0].second - lines[0].first;
  for (const auto& [b, e] : lines)
    if (e - b != cols) throw ConfigError("heatmap: scan lines differ in length");

  double vmax = -std::numeric_limits<double>::infinity();
  for (double v : values)
    if (std::isfinite(v)) vmax = std::max(vmax, v);
  if (!std::isfinite(vmax)) throw ConfigError("heatmap: no finite values");
  const double vmin = vmax - std::abs(floor_range);

  // pixel rows ~ physical aspect; image top = largest coarse coordinate
  const auto row_scale = static_cast<std::size_t>(std::clamp(
      std::round(path.coarse_pitch_m / path.fine_pitch_m), 1.0, 50.0));
  const std::size_t height = lines.size() * row_scale;
  std::vector<std::uint8_t> pixels(cols * height, 0);

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto [b, e] = lines[li];
    // line samples sorted by x (serpentine alternates direction)
    std::vector<std::size_t> order(e - b);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = b + i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
      return path.points[a].x < path.points[c].x;
    });
    for (std::size_t col = 0; col < cols; ++col) {
      double v = values[order[col]];
      if (!std::isfinite(v)) v = vmin;
      const double t = std::clamp((v - vmin) / (vmax - vmin), 0.0, 1.0);
      const auto shade = static_cast<std::uint8_t>(std::lround(t * 255.0));
      const std::size_t row_block = lines.size() - 1 - li;  // top = last line
      for (std::size_t r = 0; r < row_scale; ++r)
        pixels[(row_block * row_scale + r) * cols + col] = shade;
    }
  }
  write_grayscale_png(file, cols, height, pixels);
}

namespace {

void draw_line(std::vector<std::uint8_t>& px, std::size_t width, std::size_t height, long x0,
               long y0, long x1, long y1, std::uint8_t shade) {
  const long dx = std::abs(x1 - x0);
  const long dy = -std::abs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1;
  const long sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  for (;;) {
    if (x0 >= 0 && y0 >= 0 && x0 < static_cast<long>(width) && y0 < static_cast<long>(height))
      px[static_cast<std::size_t>(y0) * width + static_cast<std::size_t>(x0)] = shade;
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

}  // namespace

void render_chart_png(const std::vector<ChartSeries>& series, const std::string& file) {
  constexpr std::size_t kWidth = 900;
  constexpr std::size_t kHeight = 560;
  constexpr long kMargin = 50;

  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  double ymin = xmin;
  double ymax = -xmin;
  for (const ChartSeries& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;

  std::vector<std::uint8_t> px(kWidth * kHeight, 255);
  const long x_axis_y = static_cast<long>(kHeight) - kMargin;
  draw_line(px, kWidth, kHeight, kMargin, x_axis_y, static_cast<long>(kWidth) - kMargin,
            x_axis_y, 0);
  draw_line(px, kWidth, kHeight, kMargin, kMargin, kMargin, x_axis_y, 0);

  const auto to_px = [&](double x, double y) {
    const double tx = (x - xmin) / (xmax - xmin);
    const double ty = (y - ymin) / (ymax - ymin);
    const long pxx = kMargin + static_cast<long>(
                                   std::lround(tx * (static_cast<double>(kWidth) - 2 * kMargin)));
    const long pxy = x_axis_y - static_cast<long>(
                                    std::lround(ty * (static_cast<double>(kHeight) - 2 * kMargin)));
    return std::pair<long, long>{pxx, pxy};
  };

  const std::uint8_t shades[] = {0, 90, 150, 200};
  for (std::size_t si = 0; si < series.size(); ++si) {
    const ChartSeries& s = series[si];
    const std::uint8_t shade = shades[si % 4];
    for (std::size_t i = 1; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i - 1]) || !std::isfinite(s.y[i])) continue;
      const auto [ax, ay] = to_px(s.x[i - 1], s.y[i - 1]);
      const auto [bx, by] = to_px(s.x[i], s.y[i]);
      draw_line(px, kWidth, kHeight, ax, ay, bx, by, shade);
    }
    // point markers
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      const auto [cx, cy] = to_px(s.x[i], s.y[i]);
      draw_line(px, kWidth, kHeight, cx - 2, cy, cx + 2, cy, shade);
      draw_line(px, kWidth, kHeight, cx, cy - 2, cx, cy + 2, shade);
    }
  }
  write_grayscale_png(file, kWidth, kHeight, px);
}

}  // namespace beamgrid
