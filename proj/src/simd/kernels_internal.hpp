#pragma once

#include "hypereig/simd.hpp"

namespace hypereig::simd::detail {

const KernelTable& scalar_table();
#if defined(HYPEREIG_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace hypereig::simd::detail
