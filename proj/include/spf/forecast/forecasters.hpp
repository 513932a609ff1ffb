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

#ifndef SPF__FORECAST__FORECASTERS_HPP_
#define SPF__FORECAST__FORECASTERS_HPP_

#include "spf/core/types.hpp"
#include "spf/forecast/icp.hpp"

#include <span>
#include <string>
#include <vector>

namespace spf::forecast
{

enum class Method { kIdentity, kGtEgo, kAlignIcp };

const char * to_string(Method method);
/// Accepts "identity", "gt-ego", "align-icp".
Method method_from_string(const std::string & name);
/// Minimum number of past frames the method needs.
int min_past_frames(Method method);

struct ForecastRequest
{
  PointCloudSequence past;               // M frames, last one is t = 0
  int horizon{1};                        // N
  std::vector<RigidTransform> ego_poses;  // world <- sensor, one per past frame, or empty
  IcpParams icp;
};

struct ForecastResult
{
  std::vector<PointCloud> frames;  // exactly N
  Method method{Method::kIdentity};
  std::vector<std::string> diagnostics;
};

/// Mean translation plus the normalized sum of hemisphere-aligned unit
/// quaternions. Throws spf::Error on an empty list or a degenerate sum.
RigidTransform average_motion(std::span<const RigidTransform> transforms);

/// N copies of the last past frame.
ForecastResult forecast_identity(const ForecastRequest & req);

/// Averages the per-frame sensor motion implied by the ego poses and warps
/// the last frame forward by successive powers of it.
ForecastResult forecast_ego_warp(const ForecastRequest & req);

/// Same warp, with the per-frame motion estimated by ICP between adjacent
/// past frames.
ForecastResult forecast_icp_warp(const ForecastRequest & req);

ForecastResult run_forecast(Method method, const ForecastRequest & req);

/// Point motion from sensor frame t to t+1 given world <- sensor poses:
/// x_{t+1} = pose_{t+1}^-1 pose_t x_t.
RigidTransform relative_motion(const RigidTransform & pose_t, const RigidTransform & pose_next);

/// frames[k-1] = motion^k applied to `last`, k = 1..horizon.
std::vector<PointCloud> warp_forward(const PointCloud & last, const RigidTransform & motion, int horizon);

}  // namespace spf::forecast

#endif  // SPF__FORECAST__FORECASTERS_HPP_
