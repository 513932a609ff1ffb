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

#ifndef SPF__CORE__PARALLEL_HPP_
#define SPF__CORE__PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace spf
{

/// Runs body(i) for i in [0, count) on up to `jobs` threads. Every index is
/// visited exactly once. The first exception thrown by any body is rethrown
/// after all workers have joined.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)> & body);

}  // namespace spf

#endif  // SPF__CORE__PARALLEL_HPP_
