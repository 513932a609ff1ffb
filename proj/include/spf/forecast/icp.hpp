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

#ifndef SPF__FORECAST__ICP_HPP_
#define SPF__FORECAST__ICP_HPP_

#include "spf/core/types.hpp"

#include <cstddef>

namespace spf::forecast
{

struct IcpParams
{
  int max_iter{50};
  double tol{1e-6};            // meters, on the mean residual
  double max_corr_dist{2.0};  // meters
};

struct IcpResult
{
  RigidTransform transform;  // maps source onto target
  bool converged{false};
  int iterations{0};
  double residual{0.0};      // mean correspondence distance at the final pose
  std::size_t correspondences{0};
};

/// Point-to-point ICP from the identity: nearest neighbours within
/// max_corr_dist, closed-form SVD fit, repeat until the mean residual
/// changes by less than tol or max_iter is reached.
///
/// Throws spf::Error when either cloud has fewer than 3 points, when an
/// iteration finds fewer than 3 correspondences, or when the matched points
/// are collinear.
IcpResult icp_align(const PointCloud & source, const PointCloud & target, const IcpParams & params = {});

/// Least-squares rigid fit of src onto dst (Kabsch), equal-length inputs.
RigidTransform fit_rigid(const std::vector<Point3> & src, const std::vector<Point3> & dst);

}  // namespace spf::forecast

#endif  // SPF__FORECAST__ICP_HPP_
