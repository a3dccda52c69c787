// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "knnlab/kernels.hpp"

namespace knnlab::detail {

extern const KernelTable kScalarKernels;
#if defined(KNNLAB_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif

}  // namespace knnlab::detail
