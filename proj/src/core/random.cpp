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

#include "spf/core/random.hpp"

#include <limits>
#include <numeric>
#include <utility>

namespace spf
{

std::size_t Rng::uniform_index(std::size_t n)
{
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = next();
  while (draw >= limit) {
    draw = next();
  }
  return static_cast<std::size_t>(draw % bound);
}

std::vector<std::size_t> Rng::permutation(std::size_t n)
{
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::swap(out[i - 1], out[uniform_index(i)]);
  }
  return out;
}

}  // namespace spf
