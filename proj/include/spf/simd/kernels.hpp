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

#ifndef SPF__SIMD__KERNELS_HPP_
#define SPF__SIMD__KERNELS_HPP_

#include "spf/core/types.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace spf::simd
{

enum class Level { kScalar, kAvx2, kNeon };

const char * to_string(Level level);

/// Structure-of-arrays view over n points.
struct PointsView
{
  const double * x{nullptr};
  const double * y{nullptr};
  const double * z{nullptr};
  std::size_t size{0};

  PointsView subview(std::size_t begin, std::size_t end) const
  {
    return {x + begin, y + begin, z + begin, end - begin};
  }
};

struct PointBuffer
{
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> z;

  PointBuffer() = default;
  explicit PointBuffer(std::size_t n) : x(n), y(n), z(n) {}
  explicit PointBuffer(const PointCloud & cloud);

  std::size_t size() const { return x.size(); }
  PointsView view() const { return {x.data(), y.data(), z.data(), x.size()}; }
  PointCloud to_cloud() const;
};

struct NearestHit
{
  double sq_distance{std::numeric_limits<double>::infinity()};
  std::size_t index{0};
};

/// 3x3 rotation, row-major, and a translation.
struct RigidParams
{
  double r[9];
  double t[3];
};

// Every variant evaluates the same expression tree per point, so results are
// bitwise identical across levels:
//   d2  = ((qx - px)^2 + (qy - py)^2) + (qz - pz)^2
//   x'  = ((r00 x + r01 y) + r02 z) + tx
struct KernelTable
{
  Level level;

  /// Smallest d2 over the points; ties resolve to the lowest position.
  /// Returns sq_distance = +inf for an empty view.
  NearestHit (*nearest)(const Point3 & q, PointsView points);

  /// out[i] = sqrt(d2(q, points[i])).
  void (*distances)(const Point3 & q, PointsView points, double * out);

  /// out[i] = rigid(points[i]); out may not alias the input.
  void (*rigid_transform)(const RigidParams & params, PointsView points, double * out_x,
                          double * out_y, double * out_z);
};

bool is_supported(Level level);
/// Best level the running CPU supports.
Level detect_level();
/// Level used by active_kernels(). Initialized from detect_level(), or from
/// the SPF_SIMD environment variable ("scalar", "avx2", "neon") when set.
Level active_level();
/// Throws spf::Error if the level is not supported here.
void set_active_level(Level level);

const KernelTable & kernels(Level level);
const KernelTable & active_kernels();

RigidParams to_params(const RigidTransform & transform);

/// Applies `transform` to every point using the active kernels.
PointCloud transform_cloud(const RigidTransform & transform, const PointCloud & cloud);

}  // namespace spf::simd

#endif  // SPF__SIMD__KERNELS_HPP_
