// Copyright 2026 The SPF Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spf/rangemap/rangemap.hpp"

#include "spf/core/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>

namespace spf::rangemap
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr char kMagic[4] = {'S', 'P', 'F', 'R'};
constexpr std::size_t kHeaderBytes = 32;

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

double range_of(const Point3 & p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }

void put_u32(std::vector<std::uint8_t> & out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_f32(std::vector<std::uint8_t> & out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

std::uint32_t get_u32(const std::uint8_t * p)
{
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const std::uint8_t * p) { return std::bit_cast<float>(get_u32(p)); }

// True when the float32 point lands back on `bin` with the same stored range.
bool reencodes_to(const Point3 & p, const SphericalGrid & grid, Bin bin, float range)
{
  const double d = range_of(p);
  if (!(d > 0.0) || static_cast<float>(d) != range) {
    return false;
  }
  const auto b = bin_of(project_point(p), grid);
  return b && *b == bin;
}

// volatile: GCC 11's SLP vectorizer at -O3 drops the narrowing of paired
// double->float->double conversions otherwise.
double to_f32(double v)
{
  volatile float f = static_cast<float>(v);
  return f;
}

Point3 round_to_f32(const Point3 & p) { return {to_f32(p.x), to_f32(p.y), to_f32(p.z)}; }

// Nearest float32 point to `exact` that re-encodes to the same pixel. The
// plain rounding works for nearly all pixels; otherwise try a few radial
// rescalings, then single-ulp nudges per coordinate.
Point3 stable_f32_point(const Point3 & exact, const SphericalGrid & grid, Bin bin, float range)
{
  const Point3 rounded = round_to_f32(exact);
  if (reencodes_to(rounded, grid, bin, range)) {
    return rounded;
  }
  for (int k = 1; k <= 16; ++k) {
    for (int sign : {-1, 1}) {
      const double s = 1.0 + sign * k * 0x1.0p-25;
      const Point3 candidate = round_to_f32({exact.x * s, exact.y * s, exact.z * s});
      if (reencodes_to(candidate, grid, bin, range)) {
        return candidate;
      }
    }
  }
  auto nudge = [](double v, int dir) {
    const auto f = static_cast<float>(v);
    return to_f32(dir == 0 ? f : std::nextafter(f, dir > 0 ? INFINITY : -INFINITY));
  };
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dz = -1; dz <= 1; ++dz) {
        const Point3 candidate{nudge(rounded.x, dx), nudge(rounded.y, dy), nudge(rounded.z, dz)};
        if (reencodes_to(candidate, grid, bin, range)) {
          return candidate;
        }
      }
    }
  }
  return rounded;
}

}  // namespace

SphericalGrid SphericalGrid::from_degrees(std::uint32_t rows, std::uint32_t cols, double phi_min_deg,
                                          double phi_max_deg, double theta_min_deg, double theta_max_deg)
{
  SphericalGrid g;
  g.rows = rows;
  g.cols = cols;
  g.phi_min = static_cast<float>(deg2rad(phi_min_deg));
  g.phi_max = static_cast<float>(deg2rad(phi_max_deg));
  g.theta_min = static_cast<float>(deg2rad(theta_min_deg));
  g.theta_max = static_cast<float>(deg2rad(theta_max_deg));
  g.validate();
  return g;
}

SphericalGrid SphericalGrid::default_grid() { return from_degrees(120, 1024, -30.0, 10.0, 0.0, 360.0); }

void SphericalGrid::validate() const
{
  std::ostringstream msg;
  if (rows < 1 || cols < 1) {
    msg << "grid must have at least one row and column (got " << rows << "x" << cols << ")";
  } else if (!std::isfinite(phi_min) || !std::isfinite(phi_max) || !std::isfinite(theta_min) ||
             !std::isfinite(theta_max)) {
    msg << "grid bounds must be finite";
  } else if (!(phi_min < phi_max)) {
    msg << "grid requires phi_min < phi_max";
  } else if (!(theta_min < theta_max)) {
    msg << "grid requires theta_min < theta_max";
  } else if (phi_min < -std::numbers::pi / 2 - 1e-6 || phi_max > std::numbers::pi / 2 + 1e-6) {
    msg << "grid elevation bounds exceed [-90, 90] degrees";
  } else if (double{theta_max} - double{theta_min} > kTwoPi + 1e-6) {
    msg << "grid azimuth span exceeds 360 degrees";
  } else {
    return;
  }
  throw Error(msg.str());
}

double SphericalGrid::half_diagonal() const
{
  return std::sqrt(row_height() * row_height() + col_width() * col_width()) / 2.0;
}

SphericalCoord project_point(const Point3 & p)
{
  const double d = range_of(p);
  if (d == 0.0) {
    throw Error("cannot project the origin: direction undefined");
  }
  double theta = std::atan2(p.y, p.x);
  if (theta < 0.0) {
    theta += kTwoPi;
    if (theta >= kTwoPi) {
      theta = 0.0;
    }
  }
  const double phi = std::asin(std::clamp(p.z / d, -1.0, 1.0));
  return {theta, phi, d};
}

std::optional<Bin> bin_of(const SphericalCoord & c, const SphericalGrid & g)
{
  const double phi_min = g.phi_min;
  const double phi_max = g.phi_max;
  const double theta_min = g.theta_min;
  const double theta_max = g.theta_max;
  if (c.phi < phi_min || c.phi > phi_max) {
    return std::nullopt;
  }
  double theta = c.theta;
  while (theta < theta_min) {
    theta += kTwoPi;
  }
  while (theta >= theta_min + kTwoPi) {
    theta -= kTwoPi;
  }
  if (theta > theta_max) {
    return std::nullopt;
  }
  auto to_index = [](double v, double lo, double hi, std::uint32_t n) {
    const double scaled = std::floor((v - lo) / (hi - lo) * n);
    if (scaled <= 0.0) {
      return std::uint32_t{0};
    }
    return scaled >= n - 1 ? n - 1 : static_cast<std::uint32_t>(scaled);
  };
  return Bin{to_index(c.phi, phi_min, phi_max, g.rows), to_index(theta, theta_min, theta_max, g.cols)};
}

Point3 bin_center_direction(const SphericalGrid & g, Bin b)
{
  const double phi = double{g.phi_min} + (b.row + 0.5) * g.row_height();
  const double theta = double{g.theta_min} + (b.col + 0.5) * g.col_width();
  return {std::cos(phi) * std::cos(theta), std::cos(phi) * std::sin(theta), std::sin(phi)};
}

RangeMap::RangeMap(const SphericalGrid & grid)
: grid_(grid)
{
  grid_.validate();
  ranges_.assign(std::size_t{grid_.rows} * grid_.cols, 0.0f);
  mask_.assign(ranges_.size(), 0);
}

RangeMap::RangeMap(const SphericalGrid & grid, std::vector<float> ranges, std::vector<std::uint8_t> mask)
: grid_(grid), ranges_(std::move(ranges)), mask_(std::move(mask))
{
  grid_.validate();
  const std::size_t n = std::size_t{grid_.rows} * grid_.cols;
  if (ranges_.size() != n || mask_.size() != n) {
    throw Error("range map payload does not match the " + std::to_string(grid_.rows) + "x" +
                std::to_string(grid_.cols) + " grid");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool on = mask_[i] != 0;
    if (mask_[i] > 1) {
      throw Error("mask value at pixel " + std::to_string(i) + " is not 0 or 1");
    }
    if (on != (ranges_[i] != 0.0f) || (on && !(ranges_[i] > 0.0f && std::isfinite(ranges_[i])))) {
      throw Error("mask and range disagree at pixel " + std::to_string(i));
    }
  }
}

std::size_t RangeMap::occupied_count() const
{
  std::size_t n = 0;
  for (auto m : mask_) {
    n += m;
  }
  return n;
}

RangeMap encode(const PointCloud & cloud, const SphericalGrid & grid, EncodeStats * stats)
{
  grid.validate();
  const std::size_t n = std::size_t{grid.rows} * grid.cols;
  std::vector<double> best(n, 0.0);
  EncodeStats local;
  local.input_points = cloud.size();
  for (const auto & p : cloud.points()) {
    if (range_of(p) == 0.0) {
      ++local.dropped_points;
      continue;
    }
    const auto coord = project_point(p);
    const auto bin = bin_of(coord, grid);
    if (!bin) {
      ++local.dropped_points;
      continue;
    }
    double & slot = best[std::size_t{bin->row} * grid.cols + bin->col];
    if (slot != 0.0) {
      ++local.collided_points;
    }
    if (coord.d > slot) {
      slot = coord.d;
    }
  }
  std::vector<float> ranges(n, 0.0f);
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] > 0.0) {
      // A positive double can round to a float no smaller than the least
      // subnormal; clamp so the mask coupling holds for absurdly tiny ranges.
      ranges[i] = std::max(static_cast<float>(best[i]), std::numeric_limits<float>::denorm_min());
      mask[i] = 1;
    }
  }
  if (stats) {
    *stats = local;
  }
  return RangeMap(grid, std::move(ranges), std::move(mask));
}

PointCloud decode(const RangeMap & map, Precision precision)
{
  const auto & g = map.grid();
  std::vector<Point3> points;
  points.reserve(map.occupied_count());
  for (std::uint32_t r = 0; r < g.rows; ++r) {
    for (std::uint32_t c = 0; c < g.cols; ++c) {
      const Bin b{r, c};
      if (!map.occupied(b)) {
        continue;
      }
      const double d = map.range(b);
      const Point3 dir = bin_center_direction(g, b);
      const Point3 exact{d * dir.x, d * dir.y, d * dir.z};
      points.push_back(
        precision == Precision::kFloat32 ? stable_f32_point(exact, g, b, map.range(b)) : exact);
    }
  }
  return PointCloud(std::move(points));
}

std::vector<std::uint8_t> serialize(const RangeMap & map)
{
  const auto & g = map.grid();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + map.ranges().size() * 5);
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_u32(out, kFormatVersion);
  put_u32(out, g.rows);
  put_u32(out, g.cols);
  put_f32(out, g.phi_min);
  put_f32(out, g.phi_max);
  put_f32(out, g.theta_min);
  put_f32(out, g.theta_max);
  for (float r : map.ranges()) {
    put_f32(out, r);
  }
  out.insert(out.end(), map.mask().begin(), map.mask().end());
  return out;
}

RangeMap deserialize(std::span<const std::uint8_t> bytes, const std::string & origin)
{
  auto truncated = [&](std::size_t needed) {
    std::ostringstream msg;
    msg << origin << ": truncated at byte offset " << bytes.size() << " (expected " << needed
        << " bytes)";
    return Error(msg.str());
  };
  if (bytes.size() < 4) {
    throw truncated(kHeaderBytes);
  }
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    std::string found;
    for (int i = 0; i < 4; ++i) {
      const char ch = static_cast<char>(bytes[i]);
      found += std::isprint(static_cast<unsigned char>(ch)) ? ch : '?';
    }
    throw Error(origin + ": bad magic: expected 'SPFR', found '" + found + "'");
  }
  if (bytes.size() < kHeaderBytes) {
    throw truncated(kHeaderBytes);
  }
  const std::uint32_t version = get_u32(bytes.data() + 4);
  if (version != kFormatVersion) {
    throw Error(origin + ": unsupported version " + std::to_string(version) + " (expected " +
                std::to_string(kFormatVersion) + ")");
  }
  SphericalGrid g;
  g.rows = get_u32(bytes.data() + 8);
  g.cols = get_u32(bytes.data() + 12);
  g.phi_min = get_f32(bytes.data() + 16);
  g.phi_max = get_f32(bytes.data() + 20);
  g.theta_min = get_f32(bytes.data() + 24);
  g.theta_max = get_f32(bytes.data() + 28);
  try {
    g.validate();
  } catch (const Error & e) {
    throw Error(origin + ": " + e.what());
  }
  const std::size_t n = std::size_t{g.rows} * g.cols;
  const std::size_t needed = kHeaderBytes + n * 5;
  if (bytes.size() < needed) {
    throw truncated(needed);
  }
  if (bytes.size() > needed) {
    throw Error(origin + ": " + std::to_string(bytes.size() - needed) + " trailing bytes after payload");
  }
  std::vector<float> ranges(n);
  for (std::size_t i = 0; i < n; ++i) {
    ranges[i] = get_f32(bytes.data() + kHeaderBytes + 4 * i);
  }
  const auto * mask_begin = bytes.data() + kHeaderBytes + 4 * n;
  std::vector<std::uint8_t> mask(mask_begin, mask_begin + n);
  try {
    return RangeMap(g, std::move(ranges), std::move(mask));
  } catch (const Error & e) {
    throw Error(origin + ": " + e.what());
  }
}

void write_rangemap(const RangeMap & map, const std::filesystem::path & path)
{
  const auto bytes = serialize(map);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error("write failure on '" + path.string() + "'");
  }
}

RangeMap read_rangemap(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  const std::vector<std::uint8_t> bytes(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes, path.string());
}

}  // namespace spf::rangemap
