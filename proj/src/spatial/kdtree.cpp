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

#include "spf/spatial/kdtree.hpp"

#include "spf/core/error.hpp"

#include <algorithm>
#include <numeric>

namespace spf
{

namespace
{

double coord(const Point3 & p, std::uint32_t axis)
{
  return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
}

}  // namespace

KdTree::KdTree(const PointCloud & cloud, std::size_t leaf_size)
: leaf_size_(std::max<std::size_t>(leaf_size, 1)), kernels_(&simd::active_kernels())
{
  if (cloud.size() > 0xffffffffu) {
    throw Error("cloud too large for spatial index");
  }
  std::vector<std::uint32_t> idx(cloud.size());
  std::iota(idx.begin(), idx.end(), 0u);
  if (!idx.empty()) {
    nodes_.reserve(2 * (idx.size() / leaf_size_ + 1));
    build(idx, cloud, 0, static_cast<std::uint32_t>(idx.size()));
  }
  order_.assign(idx.begin(), idx.end());
  points_ = simd::PointBuffer(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto & p = cloud[idx[i]];
    points_.x[i] = p.x;
    points_.y[i] = p.y;
    points_.z[i] = p.z;
  }
}

std::int32_t KdTree::build(
  std::vector<std::uint32_t> & idx, const PointCloud & cloud, std::uint32_t begin, std::uint32_t end)
{
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  nodes_[id].begin = begin;
  nodes_[id].end = end;

  if (end - begin <= leaf_size_) {
    // Leaf scan picks the first minimizer, so keep source order inside leaves.
    std::sort(idx.begin() + begin, idx.begin() + end);
    return id;
  }

  Point3 lo = cloud[idx[begin]];
  Point3 hi = lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    const auto & p = cloud[idx[i]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const double ext[3] = {hi.x - lo.x, hi.y - lo.y, hi.z - lo.z};
  const auto axis = static_cast<std::uint32_t>(std::max_element(ext, ext + 3) - ext);

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(
    idx.begin() + begin, idx.begin() + mid, idx.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
      return coord(cloud[a], axis) < coord(cloud[b], axis);
    });
  const double split = coord(cloud[idx[mid]], axis);

  const std::int32_t left = build(idx, cloud, begin, mid);
  const std::int32_t right = build(idx, cloud, mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search(std::int32_t node_id, const Point3 & q, simd::NearestHit & best) const
{
  const Node & node = nodes_[node_id];
  if (node.left < 0) {
    const auto hit = kernels_->nearest(q, points_.view().subview(node.begin, node.end));
    if (hit.sq_distance <= best.sq_distance) {
      const std::size_t src = order_[node.begin + hit.index];
      if (hit.sq_distance < best.sq_distance || src < best.index) {
        best = {hit.sq_distance, src};
      }
    }
    return;
  }
  const double diff = coord(q, node.axis) - node.split;
  const std::int32_t near = diff < 0.0 ? node.left : node.right;
  const std::int32_t far = diff < 0.0 ? node.right : node.left;
  search(near, q, best);
  if (diff * diff <= best.sq_distance) {
    search(far, q, best);
  }
}

simd::NearestHit KdTree::nearest(const Point3 & query) const
{
  if (nodes_.empty()) {
    throw Error("nearest-neighbour query on an empty cloud");
  }
  simd::NearestHit best;
  search(0, query, best);
  return best;
}

}  // namespace spf
