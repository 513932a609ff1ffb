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

#include <immintrin.h>

#include <cmath>

// Built with -mavx2 but without -mfma: every product and sum is rounded
// separately, exactly like the scalar reference.

namespace spf::simd::detail
{

namespace
{

inline __m256d sq_dist4(__m256d qx, __m256d qy, __m256d qz, const double * x, const double * y,
                        const double * z)
{
  const __m256d dx = _mm256_sub_pd(qx, _mm256_loadu_pd(x));
  const __m256d dy = _mm256_sub_pd(qy, _mm256_loadu_pd(y));
  const __m256d dz = _mm256_sub_pd(qz, _mm256_loadu_pd(z));
  __m256d acc = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
  return _mm256_add_pd(acc, _mm256_mul_pd(dz, dz));
}

NearestHit nearest_avx2(const Point3 & q, PointsView p)
{
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);

  // Per-lane running minimum; a lane only moves on strict improvement, so it
  // holds its earliest minimizer.
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d step = _mm256_set1_pd(4.0);

  std::size_t i = 0;
  for (; i + 4 <= p.size; i += 4) {
    const __m256d d2 = sq_dist4(qx, qy, qz, p.x + i, p.y + i, p.z + i);
    const __m256d better = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, better);
    best_idx = _mm256_blendv_pd(best_idx, idx, better);
    idx = _mm256_add_pd(idx, step);
  }

  alignas(32) double lane_best[4];
  alignas(32) double lane_idx[4];
  _mm256_store_pd(lane_best, best);
  _mm256_store_pd(lane_idx, best_idx);

  NearestHit hit;
  for (int lane = 0; lane < 4; ++lane) {
    const auto li = static_cast<std::size_t>(lane_idx[lane]);
    if (lane_best[lane] < hit.sq_distance ||
        (lane_best[lane] == hit.sq_distance && li < hit.index)) {
      hit = {lane_best[lane], li};
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

void distances_avx2(const Point3 & q, PointsView p, double * out)
{
  const __m256d qx = _mm256_set1_pd(q.x);
  const __m256d qy = _mm256_set1_pd(q.y);
  const __m256d qz = _mm256_set1_pd(q.z);
  std::size_t i = 0;
  for (; i + 4 <= p.size; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(sq_dist4(qx, qy, qz, p.x + i, p.y + i, p.z + i)));
  }
  for (; i < p.size; ++i) {
    const double dx = q.x - p.x[i];
    const double dy = q.y - p.y[i];
    const double dz = q.z - p.z[i];
    out[i] = std::sqrt(dx * dx + dy * dy + dz * dz);
  }
}

inline __m256d affine_row(const double * r, double t, __m256d x, __m256d y, __m256d z)
{
  __m256d acc = _mm256_add_pd(
    _mm256_mul_pd(_mm256_set1_pd(r[0]), x), _mm256_mul_pd(_mm256_set1_pd(r[1]), y));
  acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(r[2]), z));
  return _mm256_add_pd(acc, _mm256_set1_pd(t));
}

void rigid_transform_avx2(const RigidParams & m, PointsView p, double * ox, double * oy, double * oz)
{
  std::size_t i = 0;
  for (; i + 4 <= p.size; i += 4) {
    const __m256d x = _mm256_loadu_pd(p.x + i);
    const __m256d y = _mm256_loadu_pd(p.y + i);
    const __m256d z = _mm256_loadu_pd(p.z + i);
    _mm256_storeu_pd(ox + i, affine_row(m.r, m.t[0], x, y, z));
    _mm256_storeu_pd(oy + i, affine_row(m.r + 3, m.t[1], x, y, z));
    _mm256_storeu_pd(oz + i, affine_row(m.r + 6, m.t[2], x, y, z));
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

const KernelTable kAvx2Kernels{Level::kAvx2, &nearest_avx2, &distances_avx2, &rigid_transform_avx2};

}  // namespace spf::simd::detail
