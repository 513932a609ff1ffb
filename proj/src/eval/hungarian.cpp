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

#include "spf/eval/hungarian.hpp"

#include "spf/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace spf::eval
{

namespace
{

// Cost in the ordered group Z x R with lexicographic order: the integer part
// counts forbidden pairs, the real part accumulates finite costs.
struct LexCost
{
  std::int64_t forbidden{0};
  double value{0.0};

  friend LexCost operator+(LexCost a, LexCost b) { return {a.forbidden + b.forbidden, a.value + b.value}; }
  friend LexCost operator-(LexCost a, LexCost b) { return {a.forbidden - b.forbidden, a.value - b.value}; }
  LexCost & operator+=(LexCost o) { return *this = *this + o; }
  LexCost & operator-=(LexCost o) { return *this = *this - o; }
  friend bool operator<(LexCost a, LexCost b)
  {
    return a.forbidden != b.forbidden ? a.forbidden < b.forbidden : a.value < b.value;
  }
};

template <typename Cost>
Cost unreached();

template <>
LexCost unreached<LexCost>()
{
  return {std::int64_t{1} << 50, 0.0};
}

template <>
double unreached<double>()
{
  return std::numeric_limits<double>::infinity();
}

// rows <= cols. Returns, for each row, its column.
template <typename Cost>
std::vector<std::size_t> hungarian(const std::vector<Cost> & a, std::size_t n, std::size_t m)
{
  const Cost kUnreached = unreached<Cost>();
  // 1-based potentials and matching, column 0 is the virtual source.
  std::vector<Cost> u(n + 1), v(m + 1), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  auto cost = [&](std::size_t i, std::size_t j) { return a[(i - 1) * m + (j - 1)]; };

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kUnreached);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      Cost delta = kUnreached;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) {
          continue;
        }
        const Cost cur = cost(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) {
      row_to_col[p[j] - 1] = j - 1;
    }
  }
  return row_to_col;
}

}  // namespace

AssignmentSolution solve_assignment(const Eigen::MatrixXd & costs)
{
  const auto rows = static_cast<std::size_t>(costs.rows());
  const auto cols = static_cast<std::size_t>(costs.cols());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double c = costs(i, j);
      if (std::isnan(c) || c == -std::numeric_limits<double>::infinity()) {
        throw Error("assignment cost (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") is NaN or -inf");
      }
    }
  }

  AssignmentSolution out;
  if (rows == 0 || cols == 0) {
    return out;
  }
  const bool transpose = rows > cols;
  const std::size_t n = transpose ? cols : rows;
  const std::size_t m = transpose ? rows : cols;
  auto at = [&](std::size_t i, std::size_t j) { return transpose ? costs(j, i) : costs(i, j); };

  std::vector<std::size_t> matched;
  if (costs.allFinite()) {
    std::vector<double> a(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        a[i * m + j] = at(i, j);
      }
    }
    matched = hungarian(a, n, m);
  } else {
    std::vector<LexCost> a(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        const double c = at(i, j);
        a[i * m + j] = std::isinf(c) ? LexCost{1, 0.0} : LexCost{0, c};
      }
    }
    matched = hungarian(a, n, m);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = transpose ? matched[i] : i;
    const std::size_t c = transpose ? i : matched[i];
    const double cost = costs(r, c);
    if (std::isinf(cost)) {
      continue;
    }
    out.pairs.push_back({r, c, cost});
  }
  std::sort(out.pairs.begin(), out.pairs.end(), [](const auto & x, const auto & y) { return x.row < y.row; });
  for (const auto & pair : out.pairs) {
    out.total_cost += pair.cost;
  }
  return out;
}

}  // namespace spf::eval
