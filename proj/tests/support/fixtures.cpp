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

#include "spf/core/io.hpp"

#include <Eigen/Geometry>

#include "json.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace spf::fixture
{

namespace fs = std::filesystem;

TempDir::TempDir()
{
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("spf_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1)));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir()
{
  std::error_code ec;
  fs::remove_all(path_, ec);
}

PointCloud random_cloud(Rng & rng, std::size_t n, double lo, double hi)
{
  std::vector<Point3> pts(n);
  for (auto & p : pts) {
    p = {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
  }
  return PointCloud(std::move(pts));
}

PointCloud structured_scene(Rng & rng, std::size_t n)
{
  std::vector<Point3> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    const auto kind = rng.uniform_index(5);
    const double u = rng.uniform(-1.0, 1.0);
    const double v = rng.uniform(-1.0, 1.0);
    switch (kind) {
      case 0:  // ground
        pts.push_back({25.0 * u, 25.0 * v, -1.7});
        break;
      case 1:  // wall along y
        pts.push_back({14.0, 20.0 * u, -1.7 + 2.5 * (v + 1.0)});
        break;
      case 2:  // wall along x, shorter
        pts.push_back({-5.0 + 12.0 * u, -9.0, -1.7 + 1.5 * (v + 1.0)});
        break;
      case 3:  // box face
        pts.push_back({4.0 + 1.0 * u, 5.0, -1.7 + 0.8 * (v + 1.0)});
        break;
      default:  // pole
        pts.push_back({-3.0 + 0.1 * u, 6.0 + 0.1 * v, -1.7 + 2.0 * rng.uniform01()});
        break;
    }
  }
  return PointCloud(std::move(pts));
}

RigidTransform rotation_z(double radians, const Eigen::Vector3d & translation)
{
  const Eigen::Matrix3d r = Eigen::AngleAxisd(radians, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  return RigidTransform(r, translation);
}

std::vector<PointCloud> observe(const PointCloud & world, const std::vector<RigidTransform> & poses)
{
  std::vector<PointCloud> frames;
  for (const auto & pose : poses) {
    const auto inv = pose.inverse();
    std::vector<Point3> pts;
    pts.reserve(world.size());
    for (const auto & p : world.points()) {
      pts.push_back(inv.apply(p));
    }
    frames.emplace_back(std::move(pts));
  }
  return frames;
}

std::vector<RigidTransform> constant_motion_poses(const RigidTransform & step, int count)
{
  std::vector<RigidTransform> poses;
  RigidTransform pose;
  for (int t = 0; t < count; ++t) {
    poses.push_back(pose);
    pose = pose * step;
  }
  return poses;
}

std::vector<PointCloud> translating_world(const PointCloud & world, const Eigen::Vector3d & velocity, int count)
{
  std::vector<PointCloud> frames;
  for (int t = 0; t < count; ++t) {
    std::vector<Point3> pts;
    for (const auto & p : world.points()) {
      pts.push_back({p.x + t * velocity.x(), p.y + t * velocity.y(), p.z + t * velocity.z()});
    }
    frames.emplace_back(std::move(pts));
  }
  return frames;
}

fs::path write_dataset(const fs::path & dir, const std::map<std::string, SequenceData> & sequences,
                       double frame_period)
{
  nlohmann::json doc;
  doc["frame_period"] = frame_period;
  doc["sequences"] = nlohmann::json::object();
  for (const auto & [id, data] : sequences) {
    fs::create_directories(dir / id);
    auto & list = doc["sequences"][id];
    list = nlohmann::json::array();
    for (std::size_t i = 0; i < data.frames.size(); ++i) {
      const int t = data.first_t + static_cast<int>(i);
      const std::string rel = id + "/" + std::to_string(t) + ".bin";
      save_scan_kitti(data.frames[i], dir / rel);
      nlohmann::json entry;
      entry["t"] = t;
      entry["scan"] = rel;
      if (!data.poses.empty()) {
        entry["ego"] = data.poses[i].to_row_major();
      }
      list.push_back(entry);
    }
  }
  const fs::path path = dir / "manifest.json";
  std::ofstream(path) << doc.dump(2);
  return path;
}

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace spf::fixture
