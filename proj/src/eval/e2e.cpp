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

#include "spf/eval/e2e.hpp"

#include "spf/core/error.hpp"
#include "spf/eval/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spf::eval
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_space(int t, MatchSpace space)
{
  switch (space) {
    case MatchSpace::kFuture:
      return t >= 1;
    case MatchSpace::kPast:
      return t <= 0;
    case MatchSpace::kFull:
      return true;
  }
  return false;
}

double pair_cost(const MatchedPair & p, MatchCost cost) { return cost == MatchCost::kAde ? p.ade : p.fde; }

}  // namespace

const char * to_string(MatchSpace space)
{
  switch (space) {
    case MatchSpace::kFuture:
      return "future";
    case MatchSpace::kPast:
      return "past";
    case MatchSpace::kFull:
      return "full";
  }
  return "unknown";
}

const char * to_string(MatchCost cost) { return cost == MatchCost::kAde ? "ade" : "fde"; }

PairwiseCostMatrix pairwise_costs(const TrajectorySet & pred, const TrajectorySet & gt, MatchSpace space)
{
  if (pred.empty() || gt.empty()) {
    throw Error("pairwise costs need non-empty predicted and ground-truth sets");
  }
  const auto u = static_cast<Eigen::Index>(pred.size());
  const auto v = static_cast<Eigen::Index>(gt.size());
  PairwiseCostMatrix m;
  m.ade = Eigen::MatrixXd::Constant(u, v, kInf);
  m.fde = Eigen::MatrixXd::Constant(u, v, kInf);
  m.shared_frames = Eigen::MatrixXi::Zero(u, v);

  for (Eigen::Index i = 0; i < u; ++i) {
    const auto & a = pred.trajectories[i].positions;
    for (Eigen::Index j = 0; j < v; ++j) {
      const auto & b = gt.trajectories[j].positions;
      double sum = 0.0;
      double last = 0.0;
      int shared = 0;
      auto ia = a.begin();
      auto ib = b.begin();
      while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
          ++ia;
        } else if (ib->first < ia->first) {
          ++ib;
        } else {
          if (in_space(ia->first, space)) {
            const double dx = ia->second.x - ib->second.x;
            const double dy = ia->second.y - ib->second.y;
            last = std::sqrt(dx * dx + dy * dy);
            sum += last;
            ++shared;
          }
          ++ia;
          ++ib;
        }
      }
      m.shared_frames(i, j) = shared;
      if (shared > 0) {
        m.ade(i, j) = sum / shared;
        m.fde(i, j) = last;
      }
    }
  }
  return m;
}

std::vector<MatchedPair> assign(const PairwiseCostMatrix & costs, MatchCost cost)
{
  const auto solution = solve_assignment(cost == MatchCost::kAde ? costs.ade : costs.fde);
  std::vector<MatchedPair> pairs;
  pairs.reserve(solution.pairs.size());
  for (const auto & p : solution.pairs) {
    const auto r = static_cast<Eigen::Index>(p.row);
    const auto c = static_cast<Eigen::Index>(p.col);
    pairs.push_back({p.row, p.col, costs.ade(r, c), costs.fde(r, c)});
  }
  return pairs;
}

MatchResult match_at_threshold(const PairwiseCostMatrix & costs, const std::vector<MatchedPair> & assignment,
                               double threshold, MatchCost cost)
{
  if (!(threshold >= 0.0)) {
    throw Error("match threshold must be non-negative");
  }
  MatchResult r;
  r.threshold = threshold;
  r.gt_count = costs.gt_count();
  for (const auto & p : assignment) {
    const double c = pair_cost(p, cost);
    if (std::isfinite(c) && c <= threshold) {
      r.pairs.push_back(p);
    }
  }
  r.tp = r.pairs.size();
  r.fp = costs.pred_count() - r.tp;
  r.fn = costs.gt_count() - r.tp;
  return r;
}

std::optional<AdeFde> ade_fde(const MatchResult & result)
{
  if (result.pairs.empty()) {
    return std::nullopt;
  }
  AdeFde out;
  for (const auto & p : result.pairs) {
    out.ade += p.ade;
    out.fde += p.fde;
  }
  const auto n = static_cast<double>(result.pairs.size());
  out.ade /= n;
  out.fde /= n;
  return out;
}

void RecallGrid::validate() const
{
  if (samples < 1) {
    throw Error("recall grid needs at least one sample");
  }
}

std::size_t RecallCurve::max_step(const RecallGrid & grid) const
{
  return gt_count == 0 ? 0 : max_tp * grid.samples / gt_count;
}

const RecallSample * RecallCurve::at_step(std::size_t step) const
{
  auto it = std::lower_bound(samples.begin(), samples.end(), step,
                             [](const RecallSample & s, std::size_t k) { return s.step < k; });
  return it != samples.end() && it->step == step ? &*it : nullptr;
}

RecallCurve recall_curve(const PairwiseCostMatrix & costs, const std::vector<MatchedPair> & assignment,
                         const RecallGrid & grid, MatchCost cost)
{
  grid.validate();
  RecallCurve curve;
  curve.gt_count = costs.gt_count();

  std::vector<double> thresholds;
  for (const auto & p : assignment) {
    const double c = pair_cost(p, cost);
    if (std::isfinite(c)) {
      thresholds.push_back(c);
    }
  }
  std::sort(thresholds.begin(), thresholds.end());
  curve.max_tp = thresholds.size();
  if (thresholds.empty() || curve.gt_count == 0) {
    return curve;
  }

  // Recall >= step / L  <=>  tp * L >= step * V, in integers.
  const std::size_t v = curve.gt_count;
  const std::size_t steps = curve.max_step(grid);
  std::size_t k = 0;  // pairs admitted by thresholds[k - 1], ties included
  for (std::size_t step = 1; step <= steps; ++step) {
    while (k * grid.samples < step * v) {
      ++k;
      while (k < thresholds.size() && thresholds[k] == thresholds[k - 1]) {
        ++k;
      }
    }
    const double threshold = thresholds[k - 1];
    const auto match = match_at_threshold(costs, assignment, threshold, cost);
    const auto err = ade_fde(match);
    RecallSample s;
    s.step = step;
    s.target_recall = grid.recall(step);
    s.recall = static_cast<double>(match.tp) / v;
    s.ade = err->ade;
    s.fde = err->fde;
    s.threshold = threshold;
    curve.samples.push_back(s);
  }
  return curve;
}

AverageReport aade_afde(const std::map<std::string, RecallCurve> & curves, const RecallGrid & grid)
{
  grid.validate();
  if (curves.empty()) {
    throw Error("AADE/AFDE needs at least one method");
  }
  AverageReport report;
  std::size_t steps = std::numeric_limits<std::size_t>::max();
  double ceiling = kInf;
  for (const auto & [name, curve] : curves) {
    MethodScore score;
    score.max_recall = curve.max_recall();
    score.rankable = curve.max_step(grid) >= 1;
    if (score.rankable) {
      steps = std::min(steps, curve.max_step(grid));
      ceiling = std::min(ceiling, score.max_recall);
    }
    report.methods.emplace(name, score);
  }
  if (steps == std::numeric_limits<std::size_t>::max()) {
    return report;
  }
  report.common_steps = steps;
  report.common_ceiling = ceiling;
  for (auto & [name, score] : report.methods) {
    if (!score.rankable) {
      continue;
    }
    const auto & curve = curves.at(name);
    double ade = 0.0;
    double fde = 0.0;
    for (std::size_t step = 1; step <= steps; ++step) {
      const auto * s = curve.at_step(step);
      if (s == nullptr) {
        throw Error("recall curve of \"" + name + "\" has no sample at recall " +
                    std::to_string(grid.recall(step)));
      }
      ade += s->ade;
      fde += s->fde;
    }
    score.aade = ade / static_cast<double>(steps);
    score.afde = fde / static_cast<double>(steps);
  }
  return report;
}

}  // namespace spf::eval
