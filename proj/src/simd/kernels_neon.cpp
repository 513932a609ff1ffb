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

#include <arm_neon.h>

#include <cmath>

// AArch64 only. vfmaq_f64 is deliberately not used; products and sums are
// rounded separately to stay bitwise identical to the scalar reference.

namespace spf::simd::detail
{

namespace
{

inline float64x2_t sq_dist2(float64x2_t qx, float64x2_t qy, float64x2_t qz, const double * x,
                            const double * y, const double * z)
{
  const float64x2_t dx = vsubq_f64(qx, vld1q_f64(x));
  const float64x2_t dy = vsubq_f64(qy, vld1q_f64(y));
  const float64x2_t dz = vsubq_f64(qz, vld1q_f64(z));
  const float64x2_t acc = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
  return vaddq_f64(acc, vmulq_f64(dz, dz));
}

NearestHit nearest_neon(const Point3 & q, PointsView p)
{
  const float64x2_t qx = vdupq_n_f64(q.x);
  const float64x2_t qy = vdupq_n_f64(q.y);
  const float64x2_t qz = vdupq_n_f64(q.z);
  float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
  uint64x2_t best_idx = vdupq_n_u64(0);
  const uint64_t start[2] = {0, 1};
  uint64x2_t idx = vld1q_u64(start);
  const uint64x2_t step = vdupq_n_u64(2);

  std::size_t i = 0;
  for (; i + 2 <= p.size; i += 2) {
    const float64x2_t d2 = sq_dist2(qx, qy, qz, p.x + i, p.y + i, p.z + i);
    const uint64x2_t better = vcltq_f64(d2, best);
    best = vbslq_f64(better, d2, best);
    best_idx = vbslq_u64(better, idx, best_idx);
    idx = vaddq_u64(idx, step);
  }

  NearestHit hit;
  for (int lane = 0; lane < 2; ++lane) {
    const double b = lane == 0 ? vgetq_lane_f64(best, 0) : vgetq_lane_f64(best, 1);
    const auto li =
      static_cast<std::size_t>(lane == 0 ? vgetq_lane_u64(best_idx, 0) : vgetq_lane_u64(best_idx, 1));
    if (b < hit.sq_distance || (b == hit.sq_distance && li < hit.index)) {
      hit = {b, li};
    }
  }
  for (; i < p.size; ++i) {
    const double dx = q.x - p.x[i];
    const double dy = q.y - p.y[i];
    const double dz = q.z - p.z[i];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < hit.sq_distance) {
      hit = {d2, i};
    }
  }
  return hit;
}

void distances_neon(const Point3 & q, PointsView p, double * out)
{
  const float64x2_t qx = vdupq_n_f64(q.x);
  const float64x2_t qy = vdupq_n_f64(q.y);
  const float64x2_t qz = vdupq_n_f64(q.z);
  std::size_t i = 0;
  for (; i + 2 <= p.size; i += 2) {
    vst1q_f64(out + i, vsqrtq_f64(sq_dist2(qx, qy, qz, p.x + i, p.y + i, p.z + i)));
  }
  for (; i < p.size; ++i) {
    const double dx = q.x - p.x[i];
    const double dy = q.y - p.y[i];
    const double dz = q.z - p.z[i];
    out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

inline float64x2_t affine_row(const double * r, double t, float64x2_t x, float64x2_t y, float64x2_t z)
{
  float64x2_t acc = vaddq_f64(vmulq_n_f64(x, r[0]), vmulq_n_f64(y, r[1]));
  acc = vaddq_f64(acc, vmulq_n_f64(z, r[2]));
  return vaddq_f64(acc, vdupq_n_f64(t));
}

void rigid_transform_neon(const RigidParams & m, PointsView p, double * ox, double * oy, double * oz)
{
  std::size_t i = 0;
  for (; i + 2 <= p.size; i += 2) {
    const float64x2_t x = vld1q_f64(p.x + i);
    const float64x2_t y = vld1q_f64(p.y + i);
    const float64x2_t z = vld1q_f64(p.z + i);
    vst1q_f64(ox + i, affine_row(m.r, m.t[0], x, y, z));
    vst1q_f64(oy + i, affine_row(m.r + 3, m.t[1], x, y, z));
    vst1q_f64(oz + i, affine_row(m.r + 6, m.t[2], x, y, z));
  }
  for (; i < p.size; ++i) {
    const double x = p.x[i];
    const double y = p.y[i];
    const double z = p.z[i];
    ox[i] = m.r[0] * x + m.r[1] * y + m.r[2] * z + m.t[0];
    oy[i] = m.r[3] * x + m.r[4] * y + m.r[5] * z + m.t[1];
    oz[i] = m.r[6] * x + m.r[7] * y + m.r[8] * z + m.t[2];
  }
}

}  // namespace

const KernelTable kNeonKernels{Level::kNeon, &nearest_neon, &distances_neon, &rigid_transform_neon};

}  // namespace spf::simd::detail
