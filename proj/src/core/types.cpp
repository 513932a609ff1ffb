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

#include "spf/core/types.hpp"

#include "spf/core/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <sstream>

namespace spf
{

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points))
{
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto & p = points_[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      std::ostringstream msg;
      msg << "point " << i << " has a non-finite coordinate";
      throw Error(msg.str());
    }
  }
}

RigidTransform::RigidTransform(const Eigen::Matrix3d & rotation, const Eigen::Vector3d & translation)
: rotation_(rotation), translation_(translation)
{
  if (!rotation_.allFinite() || !translation_.allFinite()) {
    throw Error("rigid transform has non-finite entries");
  }
  const double orth = (rotation_.transpose() * rotation_ - Eigen::Matrix3d::Identity()).norm();
  if (orth > kOrthonormalTolerance || rotation_.determinant() <= 0.0) {
    std::ostringstream msg;
    msg << "rotation is not a proper orthonormal matrix (|R^T R - I|_F = " << orth
        << ", det = " << rotation_.determinant() << ")";
    throw Error(msg.str());
  }
}

RigidTransform RigidTransform::from_row_major(std::span<const double> v)
{
  if (v.size() != 16) {
    throw Error("pose must have 16 entries, got " + std::to_string(v.size()));
  }
  if (v[12] != 0.0 || v[13] != 0.0 || v[14] != 0.0 || v[15] != 1.0) {
    throw Error("pose last row must be (0, 0, 0, 1)");
  }
  Eigen::Matrix3d r;
  r << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
  return {r, Eigen::Vector3d(v[3], v[7], v[11])};
}

std::vector<double> RigidTransform::to_row_major() const
{
  const auto & r = rotation_;
  const auto & t = translation_;
  return {r(0, 0), r(0, 1), r(0, 2), t.x(), r(1, 0), r(1, 1), r(1, 2), t.y(),
          r(2, 0), r(2, 1), r(2, 2), t.z(), 0.0,     0.0,     0.0,     1.0};
}

RigidTransform RigidTransform::inverse() const
{
  RigidTransform out;
  out.rotation_ = rotation_.transpose();
  out.translation_ = -(out.rotation_ * translation_);
  return out;
}

RigidTransform operator*(const RigidTransform & a, const RigidTransform & b)
{
  RigidTransform out;
  out.rotation_ = a.rotation_ * b.rotation_;
  out.translation_ = a.rotation_ * b.translation_ + a.translation_;
  return out;
}

RigidTransform RigidTransform::power(int k) const
{
  if (k < 0) {
    throw Error("transform power must be non-negative");
  }
  RigidTransform out;
  for (int i = 0; i < k; ++i) {
    out = *this * out;
  }
  return out;
}

Point3 RigidTransform::apply(const Point3 & p) const
{
  const auto & r = rotation_;
  const auto & t = translation_;
  return {
    r(0, 0) * p.x + r(0, 1) * p.y + r(0, 2) * p.z + t.x(),
    r(1, 0) * p.x + r(1, 1) * p.y + r(1, 2) * p.z + t.y(),
    r(2, 0) * p.x + r(2, 1) * p.y + r(2, 2) * p.z + t.z()};
}

bool RigidTransform::is_identity() const
{
  return rotation_ == Eigen::Matrix3d::Identity() && translation_.isZero(0.0);
}

}  // namespace spf
