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

#include "spf/core/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace spf::simd
{

namespace
{

Level initial_level()
{
  if (const char * env = std::getenv("SPF_SIMD")) {
    const std::string_view name(env);
    Level requested = detect_level();
    if (name == "scalar") {
      requested = Level::kScalar;
    } else if (name == "avx2") {
      requested = Level::kAvx2;
    } else if (name == "neon") {
      requested = Level::kNeon;
    }
    if (is_supported(requested)) {
      return requested;
    }
  }
  return detect_level();
}

std::atomic<Level> & active()
{
  static std::atomic<Level> level{initial_level()};
  return level;
}

}  // namespace

const char * to_string(Level level)
{
  switch (level) {
    case Level::kScalar:
      return "scalar";
    case Level::kAvx2:
      return "avx2";
    case Level::kNeon:
      return "neon";
  }
  return "unknown";
}

bool is_supported(Level level)
{
  switch (level) {
    case Level::kScalar:
      return true;
    case Level::kAvx2:
#if defined(SPF_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Level::kNeon:
#if defined(SPF_HAVE_NEON_KERNELS)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Level detect_level()
{
  if (is_supported(Level::kAvx2)) {
    return Level::kAvx2;
  }
  if (is_supported(Level::kNeon)) {
    return Level::kNeon;
  }
  return Level::kScalar;
}

Level active_level() { return active().load(std::memory_order_relaxed); }

void set_active_level(Level level)
{
  if (!is_supported(level)) {
    throw Error(std::string("SIMD level '") + to_string(level) + "' is not supported on this CPU");
  }
  active().store(level, std::memory_order_relaxed);
}

const KernelTable & kernels(Level level)
{
  if (!is_supported(level)) {
    throw Error(std::string("SIMD level '") + to_string(level) + "' is not supported on this CPU");
  }
  switch (level) {
#if defined(SPF_HAVE_AVX2_KERNELS)
    case Level::kAvx2:
      return detail::kAvx2Kernels;
#endif
#if defined(SPF_HAVE_NEON_KERNELS)
    case Level::kNeon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

const KernelTable & active_kernels() { return kernels(active_level()); }

PointBuffer::PointBuffer(const PointCloud & cloud) : PointBuffer(cloud.size())
{
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    x[i] = cloud[i].x;
    y[i] = cloud[i].y;
    z[i] = cloud[i].z;
  }
}

PointCloud PointBuffer::to_cloud() const
{
  std::vector<Point3> points(size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = {x[i], y[i], z[i]};
  }
  return PointCloud(std::move(points));
}

RigidParams to_params(const RigidTransform & transform)
{
  RigidParams p{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      p.r[r * 3 + c] = transform.rotation()(r, c);
    }
    p.t[r] = transform.translation()(r);
  }
  return p;
}

PointCloud transform_cloud(const RigidTransform & transform, const PointCloud & cloud)
{
  const PointBuffer in(cloud);
  PointBuffer out(cloud.size());
  active_kernels().rigid_transform(
    to_params(transform), in.view(), out.x.data(), out.y.data(), out.z.data());
  return out.to_cloud();
}

}  // namespace spf::simd
