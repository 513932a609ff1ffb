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

#ifndef SPF__EVAL__E2E_HPP_
#define SPF__EVAL__E2E_HPP_

#include "spf/core/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spf::eval
{

/// Which frames take part in matching.
enum class MatchSpace {
  kFuture,  // t >= 1
  kPast,    // t <= 0
  kFull,    // every frame
};

/// Which pairwise matrix drives the assignment and the threshold sweep.
enum class MatchCost { kAde, kFde };

struct MatchingConfig
{
  MatchSpace space{MatchSpace::kFuture};
  MatchCost cost{MatchCost::kAde};
};

const char * to_string(MatchSpace space);
const char * to_string(MatchCost cost);

/// U x V displacement errors between predicted (rows) and GT (columns).
/// Pairs sharing no valid frame hold +inf.
struct PairwiseCostMatrix
{
  Eigen::MatrixXd ade;
  Eigen::MatrixXd fde;
  Eigen::MatrixXi shared_frames;

  std::size_t pred_count() const { return static_cast<std::size_t>(ade.rows()); }
  std::size_t gt_count() const { return static_cast<std::size_t>(ade.cols()); }
};

/// ADE over frames valid in both tracks; FDE at the last such frame.
/// Throws spf::Error if either set is empty.
PairwiseCostMatrix pairwise_costs(
  const TrajectorySet & pred, const TrajectorySet & gt, MatchSpace space = MatchSpace::kFuture);

struct MatchedPair
{
  std::size_t pred{0};
  std::size_t gt{0};
  double ade{0.0};
  double fde{0.0};
};

/// Optimal partial bijection on the chosen cost. Forbidden (+inf) pairs are
/// never returned.
std::vector<MatchedPair> assign(const PairwiseCostMatrix & costs, MatchCost cost = MatchCost::kAde);

struct MatchResult
{
  double threshold{0.0};
  std::vector<MatchedPair> pairs;  // true positives
  std::size_t tp{0};
  std::size_t fp{0};
  std::size_t fn{0};
  std::size_t gt_count{0};

  double recall() const { return gt_count == 0 ? 0.0 : static_cast<double>(tp) / gt_count; }
};

/// Keeps assigned pairs whose matching cost is <= threshold.
MatchResult match_at_threshold(const PairwiseCostMatrix & costs, const std::vector<MatchedPair> & assignment,
                               double threshold, MatchCost cost = MatchCost::kAde);

struct AdeFde
{
  double ade{0.0};
  double fde{0.0};
};

/// Mean pairwise ADE/FDE over the true positives; nullopt when there are none.
std::optional<AdeFde> ade_fde(const MatchResult & result);

/// L recall values 1/L, 2/L, ..., 1.
struct RecallGrid
{
  std::size_t samples{40};

  double recall(std::size_t step) const { return static_cast<double>(step) / samples; }
  void validate() const;
};

struct RecallSample
{
  std::size_t step{0};         // grid index, target recall = step / L
  double target_recall{0.0};
  double recall{0.0};          // achieved recall at the chosen threshold
  double ade{0.0};
  double fde{0.0};
  double threshold{0.0};
};

struct RecallCurve
{
  std::vector<RecallSample> samples;  // ascending step
  std::size_t max_tp{0};
  std::size_t gt_count{0};

  double max_recall() const { return gt_count == 0 ? 0.0 : static_cast<double>(max_tp) / gt_count; }
  /// Largest grid step whose recall is reachable: floor(max_tp * L / V).
  std::size_t max_step(const RecallGrid & grid) const;
  const RecallSample * at_step(std::size_t step) const;
};

/// Sweeps the fixed assignment: for every grid recall r <= max recall, the
/// smallest threshold (a distinct pair cost) reaching recall >= r.
RecallCurve recall_curve(const PairwiseCostMatrix & costs, const std::vector<MatchedPair> & assignment,
                         const RecallGrid & grid, MatchCost cost = MatchCost::kAde);

struct MethodScore
{
  bool rankable{false};
  double max_recall{0.0};
  double aade{0.0};
  double afde{0.0};
};

struct AverageReport
{
  std::map<std::string, MethodScore> methods;
  std::size_t common_steps{0};   // |R|
  double common_ceiling{0.0};    // min max_recall over rankable methods
};

/// Averages ADE/FDE over the grid recalls every rankable method reaches. A
/// method whose max recall is below 1/L is marked unrankable and does not
/// lower the common ceiling.
AverageReport aade_afde(const std::map<std::string, RecallCurve> & curves, const RecallGrid & grid);

}  // namespace spf::eval

#endif  // SPF__EVAL__E2E_HPP_
