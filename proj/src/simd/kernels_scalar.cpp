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

#include "kernel_impl.hpp"

#include <cmath>

namespace spf::simd::detail
{

namespace
{

NearestHit nearest_scalar(const Point3 & q, PointsView p)
{
  NearestHit best;
  for (std::size_t i = 0; i < p.size; ++i) {
    const double dx = q.x - p.x[i];
    const double dy = q.y - p.y[i];
    const double dz = q.z - p.z[i];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < best.sq_distance) {
      best = {d2, i};
    }
  }
  return best;
}

void distances_scalar(const Point3 & q, PointsView p, double * out)
{
  for (std::size_t i = 0; i < p.size; ++i) {
    const double dx = q.x - p.x[i];
    const double dy = q.y - p.y[i];
    const double dz = q.z - p.z[i];
    out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

void rigid_transform_scalar(const RigidParams & m, PointsView p, double * ox, double * oy, double * oz)
{
  for (std::size_t i = 0; i < p.size; ++i) {
    const double x = p.x[i];
    const double y = p.y[i];
    const double z = p.z[i];
    ox[i] = m.r[0] * x + m.r[1] * y + m.r[2] * z + m.t[0];
    oy[i] = m.r[3] * x + m.r[4] * y + m.r[5] * z + m.t[1];
    oz[i] = m.r[6] * x + m.r[7] * y + m.r[8] * z + m.t[2];
  }
}

}  // namespace

const KernelTable kScalarKernels{
  Level::kScalar, &nearest_scalar, &distances_scalar, &rigid_transform_scalar};

}  // namespace spf::simd::detail
