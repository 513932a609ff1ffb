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

#ifndef SPF__SPATIAL__KDTREE_HPP_
#define SPF__SPATIAL__KDTREE_HPP_

#include "spf/core/types.hpp"
#include "spf/simd/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace spf
{

/// Exact nearest-neighbour index over a fixed cloud.
///
/// Leaves are scanned with the active SIMD kernel. Splits are placed on point
/// coordinates, so the plane-distance lower bound used for pruning never
/// exceeds any computed squared distance on the far side; the returned
/// minimum is therefore the same double a brute-force loop produces. Ties
/// resolve to the smallest index in the source cloud.
class KdTree
{
public:
  explicit KdTree(const PointCloud & cloud, std::size_t leaf_size = 32);

  std::size_t size() const { return order_.size(); }

  /// Index refers to the source cloud. Throws spf::Error on an empty tree.
  simd::NearestHit nearest(const Point3 & query) const;

private:
  struct Node
  {
    double split{0.0};
    std::uint32_t axis{0};
    std::uint32_t begin{0};
    std::uint32_t end{0};
    std::int32_t left{-1};
    std::int32_t right{-1};
  };

  std::int32_t build(std::vector<std::uint32_t> & idx, const PointCloud & cloud, std::uint32_t begin,
                     std::uint32_t end);
  void search(std::int32_t node, const Point3 & q, simd::NearestHit & best) const;

  std::size_t leaf_size_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> order_;  // tree position -> source index
  simd::PointBuffer points_;        // in tree order
  const simd::KernelTable * kernels_;
};

}  // namespace spf

#endif  // SPF__SPATIAL__KDTREE_HPP_
