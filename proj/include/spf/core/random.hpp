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

#ifndef SPF__CORE__RANDOM_HPP_
#define SPF__CORE__RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace spf
{

/// Seeded generator whose derived draws do not depend on the standard
/// library's distribution implementations, so sampled subsets are identical
/// across platforms.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n), n > 0, by rejection.
  std::size_t uniform_index(std::size_t n);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Fisher-Yates permutation of [0, n).
  std::vector<std::size_t> permutation(std::size_t n);

private:
  std::mt19937_64 engine_;
};

}  // namespace spf

#endif  // SPF__CORE__RANDOM_HPP_
