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

#ifndef SPF__RANGEMAP__RANGEMAP_HPP_
#define SPF__RANGEMAP__RANGEMAP_HPP_

#include "spf/core/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace spf::rangemap
{

/// Angular extent and resolution of a range map. Bounds are float32 radians
/// because that is what the file format stores; all arithmetic on them is
/// done in double.
struct SphericalGrid
{
  std::uint32_t rows{120};
  std::uint32_t cols{1024};
  float phi_min{0.0f};
  float phi_max{0.0f};
  float theta_min{0.0f};
  float theta_max{0.0f};

  /// 120 x 1024, elevation [-30 deg, 10 deg], azimuth [0 deg, 360 deg].
  static SphericalGrid default_grid();
  static SphericalGrid from_degrees(std::uint32_t rows, std::uint32_t cols, double phi_min_deg,
                                    double phi_max_deg, double theta_min_deg, double theta_max_deg);

  /// Throws spf::Error when a bound or dimension is invalid.
  void validate() const;

  double row_height() const { return (double{phi_max} - double{phi_min}) / rows; }
  double col_width() const { return (double{theta_max} - double{theta_min}) / cols; }
  /// Half the bin diagonal in radians; the reconstruction error bound is d times this.
  double half_diagonal() const;

  friend bool operator==(const SphericalGrid &, const SphericalGrid &) = default;
};

struct SphericalCoord
{
  double theta{0.0};  // azimuth in [0, 2 pi)
  double phi{0.0};    // elevation
  double d{0.0};      // range
};

/// theta = atan2(y, x) wrapped into [0, 2 pi), phi = asin(z / d).
/// Throws spf::Error for the origin, whose direction is undefined.
SphericalCoord project_point(const Point3 & p);

struct Bin
{
  std::uint32_t row{0};
  std::uint32_t col{0};

  friend bool operator==(const Bin &, const Bin &) = default;
};

/// Floor binning with clamping to the last row/column. Empty when the
/// elevation is outside [phi_min, phi_max] or the azimuth outside the grid.
std::optional<Bin> bin_of(const SphericalCoord & coord, const SphericalGrid & grid);

/// Direction of the bin center (unit vector).
Point3 bin_center_direction(const SphericalGrid & grid, Bin bin);

/// H x W ranges plus occupancy mask, row-major, row 0 at phi_min.
class RangeMap
{
public:
  /// All-empty map.
  explicit RangeMap(const SphericalGrid & grid);
  /// Throws spf::Error if sizes mismatch or the mask/range coupling is broken.
  RangeMap(const SphericalGrid & grid, std::vector<float> ranges, std::vector<std::uint8_t> mask);

  const SphericalGrid & grid() const { return grid_; }
  std::span<const float> ranges() const { return ranges_; }
  std::span<const std::uint8_t> mask() const { return mask_; }

  float range(Bin b) const { return ranges_[index(b)]; }
  bool occupied(Bin b) const { return mask_[index(b)] != 0; }
  std::size_t occupied_count() const;

  friend bool operator==(const RangeMap &, const RangeMap &) = default;

private:
  std::size_t index(Bin b) const { return std::size_t{b.row} * grid_.cols + b.col; }

  SphericalGrid grid_;
  std::vector<float> ranges_;
  std::vector<std::uint8_t> mask_;
};

struct EncodeStats
{
  std::size_t input_points{0};
  std::size_t dropped_points{0};    // outside the field of view, or at the origin
  std::size_t collided_points{0};  // landed on an occupied bin
};

/// Each point goes to its bin; on collision the largest range wins.
RangeMap encode(const PointCloud & cloud, const SphericalGrid & grid, EncodeStats * stats = nullptr);

enum class Precision {
  kDouble,
  /// Coordinates are representable as float32 and chosen so that encoding
  /// them again reproduces the map (for writing KITTI records).
  kFloat32,
};

/// One point per occupied pixel, at the bin-center direction, row-major order.
PointCloud decode(const RangeMap & map, Precision precision = Precision::kDouble);

// SPFR interchange format: "SPFR", u32 version = 1, u32 H, u32 W, f32 phi_min,
// f32 phi_max, f32 theta_min, f32 theta_max, H*W f32 ranges, H*W u8 mask.
// All little-endian, row-major.
inline constexpr std::uint32_t kFormatVersion = 1;

std::vector<std::uint8_t> serialize(const RangeMap & map);
RangeMap deserialize(std::span<const std::uint8_t> bytes, const std::string & origin = "<memory>");

void write_rangemap(const RangeMap & map, const std::filesystem::path & path);
RangeMap read_rangemap(const std::filesystem::path & path);

}  // namespace spf::rangemap

#endif  // SPF__RANGEMAP__RANGEMAP_HPP_
