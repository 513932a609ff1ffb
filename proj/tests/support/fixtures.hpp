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

#ifndef SPF__TESTS__FIXTURES_HPP_
#define SPF__TESTS__FIXTURES_HPP_

#include "spf/core/random.hpp"
#include "spf/core/types.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace spf::fixture
{

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir
{
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;
  const std::filesystem::path & path() const { return path_; }
  std::filesystem::path operator/(const std::string & name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

PointCloud random_cloud(Rng & rng, std::size_t n, double lo = -10.0, double hi = 10.0);

/// Ground plane, two walls and a few boxes: enough structure for ICP to lock on.
PointCloud structured_scene(Rng & rng, std::size_t n);

RigidTransform rotation_z(double radians, const Eigen::Vector3d & translation = Eigen::Vector3d::Zero());

/// Frame t observed from pose t (world <- sensor): p_sensor = pose^-1 p_world.
std::vector<PointCloud> observe(const PointCloud & world, const std::vector<RigidTransform> & poses);

/// Pose t = step^t, t = 0 .. count-1.
std::vector<RigidTransform> constant_motion_poses(const RigidTransform & step, int count);

/// Static ego at the origin, world translating by `velocity` every frame.
std::vector<PointCloud> translating_world(const PointCloud & world, const Eigen::Vector3d & velocity, int count);

struct SequenceData
{
  std::vector<PointCloud> frames;        // t = first_t, first_t + 1, ...
  std::vector<RigidTransform> poses;     // empty or one per frame
  int first_t{0};
};

/// Writes scans as kitti_bin and a manifest next to them; returns the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path & dir,
                                    const std::map<std::string, SequenceData> & sequences,
                                    double frame_period = 0.1);

std::string read_file(const std::filesystem::path & path);

}  // namespace spf::fixture

#endif  // SPF__TESTS__FIXTURES_HPP_
