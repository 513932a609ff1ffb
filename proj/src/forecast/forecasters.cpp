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

#include "spf/forecast/forecasters.hpp"

#include "spf/core/error.hpp"
#include "spf/simd/kernels.hpp"

#include <Eigen/Geometry>

#include <sstream>

namespace spf::forecast
{

namespace
{

void check_request(const ForecastRequest & req, Method method)
{
  if (req.horizon < 1) {
    throw Error("forecast horizon must be at least 1");
  }
  const auto m = static_cast<int>(req.past.frames.size());
  if (m < min_past_frames(method)) {
    throw Error(std::string(to_string(method)) + " needs at least " + std::to_string(min_past_frames(method)) +
                " past frames, got " + std::to_string(m));
  }
}

}  // namespace

const char * to_string(Method method)
{
  switch (method) {
    case Method::kIdentity:
      return "identity";
    case Method::kGtEgo:
      return "gt-ego";
    case Method::kAlignIcp:
      return "align-icp";
  }
  return "unknown";
}

Method method_from_string(const std::string & name)
{
  for (auto m : {Method::kIdentity, Method::kGtEgo, Method::kAlignIcp}) {
    if (name == to_string(m)) {
      return m;
    }
  }
  throw Error("unknown forecasting method \"" + name + "\" (expected identity, gt-ego or align-icp)");
}

int min_past_frames(Method method) { return method == Method::kIdentity ? 1 : 2; }

RigidTransform average_motion(std::span<const RigidTransform> transforms)
{
  if (transforms.empty()) {
    throw Error("average motion of an empty list");
  }
  if (transforms.size() == 1) {
    return transforms.front();
  }
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  Eigen::Vector4d qsum = Eigen::Vector4d::Zero();
  Eigen::Vector4d reference = Eigen::Vector4d::Zero();
  for (std::size_t i = 0; i < transforms.size(); ++i) {
    translation += transforms[i].translation();
    Eigen::Vector4d q = Eigen::Quaterniond(transforms[i].rotation()).normalized().coeffs();
    if (i == 0) {
      reference = q;
    } else if (q.dot(reference) < 0.0) {
      q = -q;
    }
    qsum += q;
  }
  translation /= static_cast<double>(transforms.size());
  const double norm = qsum.norm();
  if (norm < 1e-9) {
    throw Error("degenerate quaternion sum in motion averaging");
  }
  const Eigen::Quaterniond mean(Eigen::Vector4d(qsum / norm));
  return {mean.toRotationMatrix(), translation};
}

RigidTransform relative_motion(const RigidTransform & pose_t, const RigidTransform & pose_next)
{
  return pose_next.inverse() * pose_t;
}

std::vector<PointCloud> warp_forward(const PointCloud & last, const RigidTransform & motion, int horizon)
{
  std::vector<PointCloud> frames;
  frames.reserve(static_cast<std::size_t>(horizon));
  RigidTransform accumulated;
  for (int k = 1; k <= horizon; ++k) {
    accumulated = motion * accumulated;
    frames.push_back(accumulated.is_identity() ? last : simd::transform_cloud(accumulated, last));
  }
  return frames;
}

ForecastResult forecast_identity(const ForecastRequest & req)
{
  check_request(req, Method::kIdentity);
  ForecastResult out;
  out.method = Method::kIdentity;
  out.frames.assign(static_cast<std::size_t>(req.horizon), req.past.frames.back());
  return out;
}

ForecastResult forecast_ego_warp(const ForecastRequest & req)
{
  check_request(req, Method::kGtEgo);
  if (req.ego_poses.size() != req.past.frames.size()) {
    throw Error("gt-ego needs one ego pose per past frame (got " + std::to_string(req.ego_poses.size()) +
                " poses for " + std::to_string(req.past.frames.size()) + " frames)");
  }
  std::vector<RigidTransform> motions;
  for (std::size_t t = 0; t + 1 < req.ego_poses.size(); ++t) {
    motions.push_back(relative_motion(req.ego_poses[t], req.ego_poses[t + 1]));
  }
  const auto mean = average_motion(motions);
  ForecastResult out;
  out.method = Method::kGtEgo;
  out.frames = warp_forward(req.past.frames.back(), mean, req.horizon);
  std::ostringstream note;
  note << "average motion translation=(" << mean.translation().x() << ", " << mean.translation().y() << ", "
       << mean.translation().z() << ")";
  out.diagnostics.push_back(note.str());
  return out;
}

ForecastResult forecast_icp_warp(const ForecastRequest & req)
{
  check_request(req, Method::kAlignIcp);
  ForecastResult out;
  out.method = Method::kAlignIcp;
  std::vector<RigidTransform> motions;
  const auto & frames = req.past.frames;
  for (std::size_t t = 0; t + 1 < frames.size(); ++t) {
    const auto r = icp_align(frames[t], frames[t + 1], req.icp);
    motions.push_back(r.transform);
    std::ostringstream note;
    note << "pair " << t << "->" << t + 1 << ": iterations=" << r.iterations << " residual=" << r.residual
         << " converged=" << (r.converged ? "true" : "false");
    out.diagnostics.push_back(note.str());
  }
  out.frames = warp_forward(frames.back(), average_motion(motions), req.horizon);
  return out;
}

ForecastResult run_forecast(Method method, const ForecastRequest & req)
{
  switch (method) {
    case Method::kIdentity:
      return forecast_identity(req);
    case Method::kGtEgo:
      return forecast_ego_warp(req);
    case Method::kAlignIcp:
      return forecast_icp_warp(req);
  }
  throw Error("unknown forecasting method");
}

}  // namespace spf::forecast
