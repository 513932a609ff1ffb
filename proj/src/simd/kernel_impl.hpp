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

#ifndef SPF__SIMD__KERNEL_IMPL_HPP_
#define SPF__SIMD__KERNEL_IMPL_HPP_

// Per-ISA tables. Only the ones built for this target are defined.

#include "spf/simd/kernels.hpp"

namespace spf::simd::detail
{

extern const KernelTable kScalarKernels;
#if defined(SPF_HAVE_AVX2_KERNELS)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(SPF_HAVE_NEON_KERNELS)
extern const KernelTable kNeonKernels;
#endif

}  // namespace spf::simd::detail

#endif  // SPF__SIMD__KERNEL_IMPL_HPP_
