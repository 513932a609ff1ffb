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

#ifndef SPF__EVAL__HUNGARIAN_HPP_
#define SPF__EVAL__HUNGARIAN_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace spf::eval
{

struct AssignedPair
{
  std::size_t row{0};
  std::size_t col{0};
  double cost{0.0};
};

struct AssignmentSolution
{
  std::vector<AssignedPair> pairs;  // sorted by row
  double total_cost{0.0};
};

/// Minimum-cost assignment on a rectangular matrix (Kuhn-Munkres with
/// shortest augmenting paths, O(n^2 m)).
///
/// +inf entries are forbidden pairings. Among all matchings of size
/// min(rows, cols) the solver picks the one with the fewest forbidden pairs
/// and, among those, the least total finite cost; the forbidden pairs are
/// then dropped from the result. Both criteria are optimized exactly, not via
/// a big-M penalty. NaN or -inf entries raise spf::Error.
///
/// Ties between equally cheap matchings are broken by the fixed scan order
/// (rows ascending, columns ascending), so results are reproducible.
AssignmentSolution solve_assignment(const Eigen::MatrixXd & costs);

}  // namespace spf::eval

#endif  // SPF__EVAL__HUNGARIAN_HPP_
