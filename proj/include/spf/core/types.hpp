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

#ifndef SPF__CORE__TYPES_HPP_
#define SPF__CORE__TYPES_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace spf
{

struct Point3
{
  double x{0.0};
  double y{0.0};
  double z{0.0};

  friend bool operator==(const Point3 &, const Point3 &) = default;
};

struct Vec2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Vec2 &, const Vec2 &) = default;
};

/// An unordered scene S_t: K points in meters, K may be zero.
/// Construction rejects non-finite coordinates; the cloud is immutable after.
class PointCloud
{
public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Point3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const Point3> points() const { return points_; }
  const Point3 & operator[](std::size_t i) const { return points_[i]; }

  friend bool operator==(const PointCloud &, const PointCloud &) = default;

private:
  std::vector<Point3> points_;
};

/// Frames ordered in time with a constant period. Which frames are "past"
/// and which are "future" is decided by the consumer.
struct PointCloudSequence
{
  std::vector<PointCloud> frames;
  double frame_period{0.1};
};

/// Rigid motion x -> R x + t with R a proper rotation.
class RigidTransform
{
public:
  static constexpr double kOrthonormalTolerance = 1e-6;

  RigidTransform() : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}
  RigidTransform(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation);

  static RigidTransform identity() { return {}; }
  /// Row-major 4x4 homogeneous pose; the last row must be (0, 0, 0, 1).
  static RigidTransform from_row_major(std::span<const double> values);

  const Eigen::Matrix3d & rotation() const { return rotation_; }
  const Eigen::Vector3d & translation() const { return translation_; }

  RigidTransform inverse() const;
  /// Composition: (a * b)(x) == a(b(x)).
  friend RigidTransform operator*(const RigidTransform & a, const RigidTransform & b);
  /// k-fold repeated application, k >= 0.
  RigidTransform power(int k) const;

  Point3 apply(const Point3 & p) const;
  bool is_identity() const;

  std::vector<double> to_row_major() const;

private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// One object's ground-plane track. Frames without an entry are invalid.
struct Trajectory
{
  std::string object_id;
  std::map<int, Vec2> positions;

  std::size_t valid_count() const { return positions.size(); }
};

enum class TrajectoryRole { kPredicted, kGroundTruth };

struct TrajectorySet
{
  std::vector<Trajectory> trajectories;
  TrajectoryRole role{TrajectoryRole::kGroundTruth};
  int horizon{0};

  std::size_t size() const { return trajectories.size(); }
  bool empty() const { return trajectories.empty(); }
};

}  // namespace spf

#endif  // SPF__CORE__TYPES_HPP_
