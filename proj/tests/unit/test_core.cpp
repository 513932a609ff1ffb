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

#include "spf/core/error.hpp"
#include "spf/core/io.hpp"
#include "spf/core/parallel.hpp"
#include "spf/core/random.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

namespace
{

using namespace spf;
namespace fs = std::filesystem;

// Byte-level record writer, independent of the library's encoder.
void push_f32_le(std::vector<std::uint8_t> & out, float v)
{
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xffu));
  }
}

void write_bytes(const fs::path & p, const std::vector<std::uint8_t> & bytes)
{
  std::ofstream out(p, std::ios::binary);
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path & p, const std::string & text) { std::ofstream(p) << text; }

std::string error_of(const std::function<void()> & f)
{
  try {
    f();
  } catch (const Error & e) {
    return e.what();
  }
  return {};
}

TEST(KittiScan, SingleRecordDropsIntensity)
{
  fixture::TempDir dir;
  std::vector<std::uint8_t> bytes;
  for (float v : {1.0f, 2.0f, 3.0f, 0.5f}) {
    push_f32_le(bytes, v);
  }
  write_bytes(dir / "a.bin", bytes);
  const auto cloud = load_scan(dir / "a.bin", ScanFormat::kKittiBin);
  ASSERT_EQ(cloud.size(), 1u);
  EXPECT_EQ(cloud[0], (Point3{1.0, 2.0, 3.0}));
}

TEST(KittiScan, EmptyFileIsEmptyCloud)
{
  fixture::TempDir dir;
  write_bytes(dir / "e.bin", {});
  EXPECT_TRUE(load_scan(dir / "e.bin").empty());
}

TEST(KittiScan, TwoRecordsKeepOrder)
{
  fixture::TempDir dir;
  std::vector<std::uint8_t> bytes;
  for (float v : {-4.25f, 8.0f, 0.125f, 9.0f, 7.5f, -1.0f, 2.0f, 0.0f}) {
    push_f32_le(bytes, v);
  }
  ASSERT_EQ(bytes.size(), 32u);
  write_bytes(dir / "two.bin", bytes);
  const auto cloud = load_scan(dir / "two.bin");
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud[0], (Point3{-4.25, 8.0, 0.125}));
  EXPECT_EQ(cloud[1], (Point3{7.5, -1.0, 2.0}));
}

TEST(KittiScan, RejectsPartialRecord)
{
  fixture::TempDir dir;
  write_bytes(dir / "bad.bin", std::vector<std::uint8_t>(20, 0));
  const auto msg = error_of([&] { load_scan(dir / "bad.bin"); });
  EXPECT_NE(msg.find("not a multiple of 16"), std::string::npos) << msg;
}

TEST(KittiScan, RejectsNonFinite)
{
  fixture::TempDir dir;
  std::vector<std::uint8_t> bytes;
  for (float v : {0.0f, 0.0f, 0.0f, 0.0f, 1.0f, std::numeric_limits<float>::quiet_NaN(), 0.0f, 0.0f}) {
    push_f32_le(bytes, v);
  }
  write_bytes(dir / "nan.bin", bytes);
  const auto msg = error_of([&] { load_scan(dir / "nan.bin"); });
  EXPECT_NE(msg.find("record 1"), std::string::npos) << msg;
}

TEST(KittiScan, MissingFileIsAnError)
{
  EXPECT_THROW(load_scan("/nonexistent/spf/scan.bin"), Error);
}

TEST(KittiScan, RoundTripIsBitwise)
{
  fixture::TempDir dir;
  Rng rng(11);
  std::vector<Point3> pts;
  for (int i = 0; i < 300; ++i) {
    // Values representable in float32, so the round trip can be exact.
    pts.push_back({static_cast<float>(rng.uniform(-80, 80)), static_cast<float>(rng.uniform(-80, 80)),
                   static_cast<float>(rng.uniform(-5, 5))});
  }
  const PointCloud cloud(pts);
  save_scan_kitti(cloud, dir / "rt.bin");
  EXPECT_EQ(load_scan(dir / "rt.bin"), cloud);
  const auto bytes = fixture::read_file(dir / "rt.bin");
  ASSERT_EQ(bytes.size(), 300u * 16u);
  float intensity = 1.0f;
  std::memcpy(&intensity, bytes.data() + 12, 4);
  EXPECT_EQ(intensity, 0.0f);
}

TEST(PlyScan, AsciiVertices)
{
  fixture::TempDir dir;
  write_text(dir / "s.ply",
             "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\n"
             "property float z\nproperty float intensity\nend_header\n1 2 3 9\n-1 0.5 4 9\n");
  const auto cloud = load_scan(dir / "s.ply");
  ASSERT_EQ(cloud.size(), 2u);
  EXPECT_EQ(cloud[1], (Point3{-1.0, 0.5, 4.0}));
}

TEST(PointCloudType, RejectsNonFinite)
{
  EXPECT_THROW(PointCloud({{0, 0, std::numeric_limits<double>::infinity()}}), Error);
}

TEST(RigidTransformType, ValidatesRotation)
{
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  r(0, 0) = -1.0;  // reflection
  EXPECT_THROW(RigidTransform(r, Eigen::Vector3d::Zero()), Error);
  r = Eigen::Matrix3d::Identity() * 1.001;
  EXPECT_THROW(RigidTransform(r, Eigen::Vector3d::Zero()), Error);
}

TEST(RigidTransformType, ComposeInverseAndPower)
{
  const auto a = fixture::rotation_z(0.3, {1.0, -2.0, 0.5});
  const auto id = a * a.inverse();
  EXPECT_LT((id.rotation() - Eigen::Matrix3d::Identity()).norm(), 1e-12);
  EXPECT_LT(id.translation().norm(), 1e-12);
  const auto a3 = a.power(3);
  const auto ref = a * a * a;
  EXPECT_LT((a3.rotation() - ref.rotation()).norm(), 1e-12);
  EXPECT_LT((a3.translation() - ref.translation()).norm(), 1e-12);
  EXPECT_TRUE(a.power(0).is_identity());
  const auto rm = a.to_row_major();
  ASSERT_EQ(rm.size(), 16u);
  const auto back = RigidTransform::from_row_major(rm);
  EXPECT_EQ(back.rotation(), a.rotation());
  EXPECT_EQ(back.translation(), a.translation());
}

TEST(Trajectories, ValidFramesFromKeys)
{
  const auto set = parse_trajectories("{\"id\":\"a\",\"frames\":{\"1\":[0,0],\"2\":[1,0]}}\n",
                                      TrajectoryRole::kGroundTruth, "t.jsonl");
  ASSERT_EQ(set.size(), 1u);
  EXPECT_EQ(set.trajectories[0].valid_count(), 2u);
  EXPECT_EQ(set.horizon, 2);
}

TEST(Trajectories, GapIsMaskedOut)
{
  const auto set = parse_trajectories("{\"id\":\"a\",\"frames\":{\"1\":[0,0],\"3\":[2,0]}}",
                                      TrajectoryRole::kGroundTruth, "t.jsonl");
  const auto & pos = set.trajectories[0].positions;
  EXPECT_EQ(pos.size(), 2u);
  EXPECT_TRUE(pos.contains(1));
  EXPECT_FALSE(pos.contains(2));
  EXPECT_TRUE(pos.contains(3));
}

TEST(Trajectories, DuplicateIdNamesBothLines)
{
  const auto msg = error_of([] {
    parse_trajectories("{\"id\":\"a\",\"frames\":{\"1\":[0,0]}}\n\n{\"id\":\"a\",\"frames\":{\"1\":[1,0]}}\n",
                       TrajectoryRole::kGroundTruth, "t.jsonl");
  });
  EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(Trajectories, MalformedAndEmptyReportLine)
{
  auto msg = error_of([] {
    parse_trajectories("{\"id\":\"a\",\"frames\":{\"1\":[0,0]}}\n{not json\n", TrajectoryRole::kGroundTruth,
                       "t.jsonl");
  });
  EXPECT_NE(msg.find("t.jsonl:2"), std::string::npos) << msg;
  msg = error_of([] {
    parse_trajectories("{\"id\":\"b\",\"frames\":{}}\n", TrajectoryRole::kGroundTruth, "t.jsonl");
  });
  EXPECT_NE(msg.find("t.jsonl:1"), std::string::npos) << msg;
}

TEST(Trajectories, ZIsDropped)
{
  const auto set = parse_trajectories("{\"id\":\"a\",\"frames\":{\"4\":[1.5,2.5,9.0]}}",
                                      TrajectoryRole::kPredicted, "t.jsonl");
  EXPECT_EQ(set.trajectories[0].positions.at(4), (Vec2{1.5, 2.5}));
  EXPECT_EQ(set.role, TrajectoryRole::kPredicted);
}

TEST(Manifest, LoadsResolvesAndIsDeterministic)
{
  fixture::TempDir dir;
  Rng rng(3);
  fixture::SequenceData seq;
  for (int i = 0; i < 3; ++i) {
    seq.frames.push_back(fixture::random_cloud(rng, 5));
  }
  seq.poses = fixture::constant_motion_poses(fixture::rotation_z(0.1, {1, 0, 0}), 3);
  const auto path = fixture::write_dataset(dir.path(), {{"s0", seq}}, 0.5);
  const auto a = load_manifest(path);
  const auto b = load_manifest(path);
  EXPECT_EQ(a.frame_period, 0.5);
  ASSERT_EQ(a.sequence("s0").size(), 3u);
  EXPECT_TRUE(a.sequence("s0")[0].scan.is_absolute());
  EXPECT_TRUE(a.sequence("s0")[2].ego.has_value());
  EXPECT_EQ(a.sequences, b.sequences);
  EXPECT_EQ(load_sequence(a, "s0").frames, load_sequence(b, "s0").frames);
}

TEST(Manifest, RejectsMissingFileAndGaps)
{
  fixture::TempDir dir;
  write_bytes(dir / "0.bin", {});
  write_text(dir / "m1.json",
             R"({"frame_period":0.1,"sequences":{"s":[{"t":0,"scan":"0.bin"},{"t":1,"scan":"nope.bin"}]}})");
  EXPECT_THROW(load_manifest(dir / "m1.json"), Error);
  write_bytes(dir / "2.bin", {});
  write_text(dir / "m2.json",
             R"({"frame_period":0.1,"sequences":{"s":[{"t":0,"scan":"0.bin"},{"t":2,"scan":"2.bin"}]}})");
  const auto msg = error_of([&] { load_manifest(dir / "m2.json"); });
  EXPECT_NE(msg.find("contiguous"), std::string::npos) << msg;
}

TEST(Manifest, NestedEgoMatrixAndSaveRoundTrip)
{
  fixture::TempDir dir;
  write_bytes(dir / "0.bin", {});
  write_text(dir / "corr.txt", "0 0\n");
  write_text(dir / "m.json",
             R"({"frame_period":0.1,"sequences":{"s":[{"t":0,"scan":"0.bin","corr":"corr.txt",
                "ego":[[1,0,0,2],[0,1,0,3],[0,0,1,4],[0,0,0,1]]}]}})");
  const auto m = load_manifest(dir / "m.json");
  const auto & f = m.sequence("s")[0];
  ASSERT_TRUE(f.ego.has_value());
  EXPECT_EQ(f.ego->translation(), Eigen::Vector3d(2, 3, 4));
  ASSERT_TRUE(f.corr.has_value());
  fs::create_directories(dir / "out");
  save_manifest(m, dir / "out" / "copy.json");
  EXPECT_EQ(load_manifest(dir / "out" / "copy.json").sequences, m.sequences);
}

TEST(Correspondences, ParsesPairs)
{
  fixture::TempDir dir;
  write_text(dir / "c.txt", "0 3\n2 1\n");
  const auto c = load_correspondences(dir / "c.txt");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[1], (std::pair<std::size_t, std::size_t>{2, 1}));
  write_text(dir / "bad.txt", "0 x\n");
  EXPECT_THROW(load_correspondences(dir / "bad.txt"), Error);
}

TEST(RngTest, SeededAndPortable)
{
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next(), b.next());
  }
  Rng c(7);
  const auto perm = c.permutation(50);
  std::vector<bool> seen(50, false);
  for (auto i : perm) {
    ASSERT_LT(i, 50u);
    EXPECT_FALSE(seen[i]);
    seen[i] = true;
  }
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(c.uniform_index(7), 7u);
  }
}

TEST(ParallelFor, CoversEveryIndexAndRethrows)
{
  std::vector<int> hits(257, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) {
    EXPECT_EQ(h, 1);
  }
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
    if (i == 6) {
      throw Error("boom");
    }
  }),
               Error);
}

}  // namespace
