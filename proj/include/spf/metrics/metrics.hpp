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

#ifndef SPF__METRICS__METRICS_HPP_
#define SPF__METRICS__METRICS_HPP_

#include "spf/core/types.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace spf::metrics
{

enum class Normalization {
  kSum,       // plain sums, as in the training loss
  kPerPoint,  // each directional sum divided by its cloud's size
};

struct MetricConfig
{
  std::size_t emd_sample_count{1024};
  std::uint64_t sampling_seed{0};

  void validate() const;
};

/// Sum over a of the squared distance to the nearest point of b, plus the
/// same from b to a. Exact: equals the brute-force double loop bit for bit.
/// Throws spf::Error if either cloud is empty.
double chamfer(const PointCloud & a, const PointCloud & b, Normalization norm = Normalization::kSum);

/// Indices of `count` points drawn from a cloud of size k: a seeded random
/// subset when k >= count, otherwise every index once followed by draws
/// with replacement. Depends only on (k, count, seed).
std::vector<std::size_t> sample_indices(std::size_t k, std::size_t count, std::uint64_t seed);

struct EmdResult
{
  double total{0.0};  // sum of matched L2 distances
  double mean{0.0};   // total / sample count
  std::size_t samples{0};
};

/// Both clouds are resampled to cfg.emd_sample_count points with the same
/// seed, then matched exactly by the assignment solver.
EmdResult emd_detailed(const PointCloud & a, const PointCloud & b, const MetricConfig & cfg);

/// emd_detailed(...).mean for kPerPoint, .total for kSum.
double emd(const PointCloud & a, const PointCloud & b, const MetricConfig & cfg,
           Normalization norm = Normalization::kPerPoint);

using Correspondence = std::pair<std::size_t, std::size_t>;

/// Per-point flow error. `predicted[i]` is the forecast position of
/// `source[i]`; each pair (i, j) says source point i truly moved to
/// target[j]. Returns the mean over pairs of
/// |(predicted[i] - source[i]) - (target[j] - source[i])|.
double ppfe(const PointCloud & source, const PointCloud & predicted, const PointCloud & target,
            std::span<const Correspondence> correspondences);

/// {metric, value, normalized, emd_sample_count?, seed?}
struct MetricReport
{
  std::string metric;
  double value{0.0};
  bool normalized{false};
  std::optional<std::size_t> emd_sample_count;
  std::optional<std::uint64_t> seed;
};

nlohmann::json to_json(const MetricReport & report);

}  // namespace spf::metrics

#endif  // SPF__METRICS__METRICS_HPP_
