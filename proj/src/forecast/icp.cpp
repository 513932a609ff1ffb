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

#include "spf/forecast/icp.hpp"

#include "spf/core/error.hpp"
#include "spf/simd/kernels.hpp"
#include "spf/spatial/kdtree.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace spf::forecast
{

RigidTransform fit_rigid(const std::vector<Point3> & src, const std::vector<Point3> & dst)
{
  if (src.size() != dst.size() || src.size() < 3) {
    throw Error("rigid fit needs at least 3 paired points");
  }
  const auto n = static_cast<double>(src.size());
  Eigen::Vector3d cs = Eigen::Vector3d::Zero();
  Eigen::Vector3d cd = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += Eigen::Vector3d(src[i].x, src[i].y, src[i].z);
    cd += Eigen::Vector3d(dst[i].x, dst[i].y, dst[i].z);
  }
  cs /= n;
  cd /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    h += (Eigen::Vector3d(src[i].x, src[i].y, src[i].z) - cs) *
         (Eigen::Vector3d(dst[i].x, dst[i].y, dst[i].z) - cd).transpose();
  }
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto & sv = svd.singularValues();
  if (!(sv(1) > 1e-12 * std::max(sv(0), 1e-300))) {
    throw Error("degenerate correspondence set: points are collinear");
  }
  const Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  Eigen::Matrix3d fix = Eigen::Matrix3d::Identity();
  fix(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = v * fix * u.transpose();
  return {r, cd - r * cs};
}

IcpResult icp_align(const PointCloud & source, const PointCloud & target, const IcpParams & params)
{
  if (source.size() < 3 || target.size() < 3) {
    throw Error("ICP needs at least 3 points in each cloud (got " + std::to_string(source.size()) + " and " +
                std::to_string(target.size()) + ")");
  }
  if (params.max_iter < 1 || !(params.tol >= 0.0) || !(params.max_corr_dist > 0.0)) {
    throw Error("invalid ICP parameters");
  }
  {
    // Reject a degenerate source before any correspondence search.
    std::vector<Point3> pts(source.points().begin(), source.points().end());
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    for (const auto & p : pts) {
      c += Eigen::Vector3d(p.x, p.y, p.z);
    }
    c /= static_cast<double>(pts.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto & p : pts) {
      const Eigen::Vector3d v = Eigen::Vector3d(p.x, p.y, p.z) - c;
      cov += v * v.transpose();
    }
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov);
    const auto & sv = svd.singularValues();
    if (!(sv(1) > 1e-12 * std::max(sv(0), 1e-300))) {
      throw Error("ICP source points are collinear");
    }
  }
  const KdTree tree(target);
  const double max_d2 = params.max_corr_dist * params.max_corr_dist;

  IcpResult result;
  double previous = std::numeric_limits<double>::infinity();
  std::vector<Point3> src;
  std::vector<Point3> dst;
  for (int it = 1; it <= params.max_iter; ++it) {
    result.iterations = it;
    const PointCloud moved = simd::transform_cloud(result.transform, source);
    src.clear();
    dst.clear();
    double residual = 0.0;
    for (std::size_t i = 0; i < moved.size(); ++i) {
      const auto hit = tree.nearest(moved[i]);
      if (hit.sq_distance <= max_d2) {
        src.push_back(moved[i]);
        dst.push_back(target[hit.index]);
        residual += std::sqrt(hit.sq_distance);
      }
    }
    if (src.size() < 3) {
      throw Error("ICP iteration " + std::to_string(it) + " found only " + std::to_string(src.size()) +
                  " correspondences within " + std::to_string(params.max_corr_dist) + " m");
    }
    residual /= static_cast<double>(src.size());
    result.residual = residual;
    result.correspondences = src.size();
    if (residual <= params.tol || std::abs(previous - residual) < params.tol) {
      result.converged = true;
      break;
    }
    previous = residual;
    result.transform = fit_rigid(src, dst) * result.transform;
  }
  return result;
}

}  // namespace spf::forecast
