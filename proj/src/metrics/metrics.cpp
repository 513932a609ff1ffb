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

#include "spf/metrics/metrics.hpp"

#include "spf/core/error.hpp"
#include "spf/core/random.hpp"
#include "spf/eval/hungarian.hpp"
#include "spf/simd/kernels.hpp"
#include "spf/spatial/kdtree.hpp"

#include <Eigen/Core>

#include <cmath>
#include <unordered_set>

namespace spf::metrics
{

namespace
{

double directed_sum(const PointCloud & from, const KdTree & to)
{
  double sum = 0.0;
  for (const auto & p : from.points()) {
    sum += to.nearest(p).sq_distance;
  }
  return sum;
}

void require_nonempty(const PointCloud & a, const PointCloud & b, const char * metric)
{
  if (a.empty() || b.empty()) {
    throw Error(std::string(metric) + " is undefined for an empty cloud");
  }
}

simd::PointBuffer gather(const PointCloud & cloud, const std::vector<std::size_t> & idx)
{
  simd::PointBuffer out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto & p = cloud[idx[i]];
    out.x[i] = p.x;
    out.y[i] = p.y;
    out.z[i] = p.z;
  }
  return out;
}

}  // namespace

void MetricConfig::validate() const
{
  if (emd_sample_count < 1) {
    throw Error("emd_sample_count must be at least 1");
  }
}

double chamfer(const PointCloud & a, const PointCloud & b, Normalization norm)
{
  require_nonempty(a, b, "chamfer distance");
  const KdTree tree_a(a);
  const KdTree tree_b(b);
  const double ab = directed_sum(a, tree_b);
  const double ba = directed_sum(b, tree_a);
  if (norm == Normalization::kPerPoint) {
    return ab / static_cast<double>(a.size()) + ba / static_cast<double>(b.size());
  }
  return ab + ba;
}

std::vector<std::size_t> sample_indices(std::size_t k, std::size_t count, std::uint64_t seed)
{
  if (k == 0) {
    throw Error("cannot sample from an empty cloud");
  }
  Rng rng(seed);
  if (k >= count) {
    auto perm = rng.permutation(k);
    perm.resize(count);
    return perm;
  }
  std::vector<std::size_t> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    out[i] = i;
  }
  while (out.size() < count) {
    out.push_back(rng.uniform_index(k));
  }
  return out;
}

EmdResult emd_detailed(const PointCloud & a, const PointCloud & b, const MetricConfig & cfg)
{
  cfg.validate();
  require_nonempty(a, b, "earth mover's distance");
  const std::size_t n = cfg.emd_sample_count;
  const auto sa = gather(a, sample_indices(a.size(), n, cfg.sampling_seed));
  const auto sb = gather(b, sample_indices(b.size(), n, cfg.sampling_seed));

  const auto & k = simd::active_kernels();
  const auto nn = static_cast<Eigen::Index>(n);
  // Row-major so each row is a contiguous kernel output.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> cost(nn, nn);
  for (std::size_t i = 0; i < n; ++i) {
    k.distances({sa.x[i], sa.y[i], sa.z[i]}, sb.view(), cost.row(static_cast<Eigen::Index>(i)).data());
  }
  const auto solution = eval::solve_assignment(cost);
  EmdResult r;
  r.samples = n;
  r.total = solution.total_cost;
  r.mean = r.total / static_cast<double>(n);
  return r;
}

double emd(const PointCloud & a, const PointCloud & b, const MetricConfig & cfg, Normalization norm)
{
  const auto r = emd_detailed(a, b, cfg);
  return norm == Normalization::kPerPoint ? r.mean : r.total;
}

double ppfe(const PointCloud & source, const PointCloud & predicted, const PointCloud & target,
            std::span<const Correspondence> correspondences)
{
  if (correspondences.empty()) {
    throw Error("per-point flow error needs at least one correspondence");
  }
  if (predicted.size() != source.size()) {
    throw Error("predicted cloud must be point-aligned with the source (" +
                std::to_string(predicted.size()) + " vs " + std::to_string(source.size()) + " points)");
  }
  std::unordered_set<std::size_t> seen_src;
  std::unordered_set<std::size_t> seen_dst;
  double sum = 0.0;
  for (const auto & [i, j] : correspondences) {
    if (i >= source.size() || j >= target.size()) {
      throw Error("correspondence (" + std::to_string(i) + ", " + std::to_string(j) + ") is out of range");
    }
    if (!seen_src.insert(i).second || !seen_dst.insert(j).second) {
      throw Error("correspondences are not one-to-one at (" + std::to_string(i) + ", " +
                  std::to_string(j) + ")");
    }
    const auto & s = source[i];
    const auto & p = predicted[i];
    const auto & t = target[j];
    const double ex = (p.x - s.x) - (t.x - s.x);
    const double ey = (p.y - s.y) - (t.y - s.y);
    const double ez = (p.z - s.z) - (t.z - s.z);
    sum += std::sqrt(ex * ex + ey * ey + ez * ez);
  }
  return sum / static_cast<double>(correspondences.size());
}

nlohmann::json to_json(const MetricReport & report)
{
  nlohmann::json j;
  j["metric"] = report.metric;
  j["value"] = report.value;
  j["normalized"] = report.normalized;
  if (report.emd_sample_count) {
    j["emd_sample_count"] = *report.emd_sample_count;
  }
  if (report.seed) {
    j["seed"] = *report.seed;
  }
  return j;
}

}  // namespace spf::metrics
