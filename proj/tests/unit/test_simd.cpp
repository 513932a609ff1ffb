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

#include "fixtures.hpp"
#include "oracles.hpp"

#include "spf/simd/kernels.hpp"
#include "spf/spatial/kdtree.hpp"

#include <gtest/gtest.h>

#include <cstring>

namespace
{

using namespace spf;
using simd::Level;

std::vector<Level> supported_vector_levels()
{
  std::vector<Level> out;
  for (Level l : {Level::kAvx2, Level::kNeon}) {
    if (simd::is_supported(l)) {
      out.push_back(l);
    }
  }
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

TEST(SimdDispatch, ScalarAlwaysAvailable)
{
  EXPECT_TRUE(simd::is_supported(Level::kScalar));
  EXPECT_EQ(simd::kernels(Level::kScalar).level, Level::kScalar);
  EXPECT_TRUE(simd::is_supported(simd::detect_level()));
  const Level before = simd::active_level();
  simd::set_active_level(Level::kScalar);
  EXPECT_EQ(simd::active_kernels().level, Level::kScalar);
  simd::set_active_level(before);
}

TEST(SimdEquivalence, DistancesBitwise)
{
  Rng rng(5);
  for (Level level : supported_vector_levels()) {
    const auto & vec = simd::kernels(level);
    const auto & ref = simd::kernels(Level::kScalar);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 13u, 64u, 1001u}) {
      const simd::PointBuffer buf(fixture::random_cloud(rng, n, -100, 100));
      const Point3 q{rng.uniform(-100, 100), rng.uniform(-100, 100), rng.uniform(-100, 100)};
      std::vector<double> a(n), b(n);
      ref.distances(q, buf.view(), a.data());
      vec.distances(q, buf.view(), b.data());
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_TRUE(same_bits(a[i], b[i])) << simd::to_string(level) << " n=" << n << " i=" << i;
      }
    }
  }
}

TEST(SimdEquivalence, NearestBitwiseWithTies)
{
  Rng rng(6);
  for (Level level : supported_vector_levels()) {
    const auto & vec = simd::kernels(level);
    const auto & ref = simd::kernels(Level::kScalar);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 1 + rng.uniform_index(70);
      std::vector<Point3> pts;
      for (std::size_t i = 0; i < n; ++i) {
        // Small integer grid: many exact ties.
        pts.push_back({double(rng.uniform_index(3)), double(rng.uniform_index(3)), double(rng.uniform_index(2))});
      }
      const PointCloud cloud(pts);
      const simd::PointBuffer buf(cloud);
      const Point3 q{double(rng.uniform_index(3)) + 0.5, double(rng.uniform_index(3)), 0.5};
      const auto a = ref.nearest(q, buf.view());
      const auto b = vec.nearest(q, buf.view());
      const auto o = oracle::nearest(q, cloud);
      ASSERT_TRUE(same_bits(a.sq_distance, b.sq_distance));
      ASSERT_EQ(a.index, b.index);
      ASSERT_EQ(a.index, o.second);
      ASSERT_EQ(a.sq_distance, o.first);
    }
  }
}

TEST(SimdEquivalence, RigidTransformBitwise)
{
  Rng rng(8);
  const auto t = fixture::rotation_z(0.37, {1.25, -3.5, 0.2});
  const auto params = simd::to_params(t);
  for (Level level : supported_vector_levels()) {
    for (std::size_t n : {1u, 2u, 4u, 9u, 100u, 257u}) {
      const simd::PointBuffer buf(fixture::random_cloud(rng, n, -50, 50));
      simd::PointBuffer a(n), b(n);
      simd::kernels(Level::kScalar).rigid_transform(params, buf.view(), a.x.data(), a.y.data(), a.z.data());
      simd::kernels(level).rigid_transform(params, buf.view(), b.x.data(), b.y.data(), b.z.data());
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_TRUE(same_bits(a.x[i], b.x[i]) && same_bits(a.y[i], b.y[i]) && same_bits(a.z[i], b.z[i]));
      }
    }
  }
}

TEST(SimdKernels, ScalarTransformMatchesApply)
{
  Rng rng(9);
  const auto t = fixture::rotation_z(-1.1, {0.5, 0.25, -2.0});
  const auto cloud = fixture::random_cloud(rng, 50);
  const auto out = simd::transform_cloud(t, cloud);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto ref = t.apply(cloud[i]);
    EXPECT_NEAR(out[i].x, ref.x, 1e-12);
    EXPECT_NEAR(out[i].y, ref.y, 1e-12);
    EXPECT_NEAR(out[i].z, ref.z, 1e-12);
  }
}

class KdTreeLevels : public ::testing::TestWithParam<Level>
{
};

TEST_P(KdTreeLevels, MatchesBruteForce)
{
  if (!simd::is_supported(GetParam())) {
    GTEST_SKIP() << "kernel level not available on this CPU";
  }
  const Level before = simd::active_level();
  simd::set_active_level(GetParam());
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(600);
    const auto cloud = fixture::random_cloud(rng, n, -20, 20);
    const KdTree tree(cloud, 1 + rng.uniform_index(40));
    for (int q = 0; q < 50; ++q) {
      const Point3 p{rng.uniform(-25, 25), rng.uniform(-25, 25), rng.uniform(-25, 25)};
      const auto hit = tree.nearest(p);
      const auto ref = oracle::nearest(p, cloud);
      ASSERT_EQ(hit.sq_distance, ref.first);
      ASSERT_EQ(hit.index, ref.second);
    }
  }
  simd::set_active_level(before);
}

TEST_P(KdTreeLevels, DuplicatePointsResolveToLowestIndex)
{
  if (!simd::is_supported(GetParam())) {
    GTEST_SKIP() << "kernel level not available on this CPU";
  }
  const Level before = simd::active_level();
  simd::set_active_level(GetParam());
  std::vector<Point3> pts(200, Point3{1, 1, 1});
  pts[17] = {0, 0, 0};
  pts[150] = {0, 0, 0};
  const KdTree tree(PointCloud(pts), 4);
  EXPECT_EQ(tree.nearest({0.1, 0, 0}).index, 17u);
  EXPECT_EQ(tree.nearest({1, 1, 1.2}).index, 0u);
  simd::set_active_level(before);
}

INSTANTIATE_TEST_SUITE_P(Levels, KdTreeLevels, ::testing::Values(Level::kScalar, Level::kAvx2, Level::kNeon),
                         [](const auto & info) { return std::string(simd::to_string(info.param)); });

TEST(KdTree, EmptyTreeThrows)
{
  const KdTree tree{PointCloud{}};
  EXPECT_THROW(tree.nearest({0, 0, 0}), std::exception);
}

}  // namespace
