// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 only; never called unless the CPU reports AVX2.

#include <immintrin.h>

#include <bit>
#include <cmath>

#include "tables.hpp"

namespace knnlab::detail {

namespace {

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void euclidean(const double* coords, std::size_t n, std::size_t dim, const double* query, double* out) {
    std::size_t i = 0;
    if (dim == 1) {
        const __m256d q = _mm256_set1_pd(query[0]);
        for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, abs_pd(_mm256_sub_pd(_mm256_loadu_pd(coords + i), q)));
        for (; i < n; ++i) out[i] = std::fabs(coords[i] - query[0]);
        return;
    }
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t k = 0; k < dim; ++k) {
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(coords + k * n + i), _mm256_set1_pd(query[k]));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
        }
        _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
    }
    for (; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double diff = coords[k * n + i] - query[k];
            acc = acc + diff * diff;
        }
        out[i] = std::sqrt(acc);
    }
}

void cg_interval(const double* xs, std::size_t n, double query, double* out) {
    const __m256d q = _mm256_set1_pd(query);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d query_zero = _mm256_cmp_pd(q, zero, _CMP_EQ_OQ);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(xs + i);
        const __m256d same = _mm256_cmp_pd(x, q, _CMP_EQ_OQ);
        const __m256d touches_origin = _mm256_or_pd(query_zero, _mm256_cmp_pd(x, zero, _CMP_EQ_OQ));
        const __m256d d = _mm256_blendv_pd(two, one, touches_origin);
        _mm256_storeu_pd(out + i, _mm256_andnot_pd(same, d));
    }
    const bool qz = query == 0.0;
    for (; i < n; ++i) out[i] = xs[i] == query ? 0.0 : ((qz || xs[i] == 0.0) ? 1.0 : 2.0);
}

void two_valued(const std::int64_t* idx, std::size_t n, std::int64_t query, double r, double* out) {
    const __m256i q = _mm256_set1_epi64x(query);
    const __m256d rv = _mm256_set1_pd(r);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(idx + i));
        const __m256d same = _mm256_castsi256_pd(_mm256_cmpeq_epi64(v, q));
        _mm256_storeu_pd(out + i, _mm256_andnot_pd(same, rv));
    }
    for (; i < n; ++i) out[i] = idx[i] == query ? 0.0 : r;
}

void hedgehog(const std::int64_t* spine, const double* t, std::size_t n, std::int64_t query_spine, double query_t,
              double* out) {
    const __m256i qs = _mm256_set1_epi64x(query_spine);
    const __m256d qt = _mm256_set1_pd(query_t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(spine + i));
        const __m256d tv = _mm256_loadu_pd(t + i);
        const __m256d same = _mm256_castsi256_pd(_mm256_cmpeq_epi64(s, qs));
        const __m256d along = abs_pd(_mm256_sub_pd(tv, qt));
        const __m256d through_glue = _mm256_add_pd(tv, qt);
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(through_glue, along, same));
    }
    for (; i < n; ++i) out[i] = spine[i] == query_spine ? std::fabs(t[i] - query_t) : t[i] + query_t;
}

void count_below_equal(const double* d, std::size_t n, double bound, std::size_t* below, std::size_t* equal) {
    const __m256d b = _mm256_set1_pd(bound);
    std::size_t lt = 0, eq = 0, i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(d + i);
        lt += std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(v, b, _CMP_LT_OQ))));
        eq += std::popcount(static_cast<unsigned>(_mm256_movemask_pd(_mm256_cmp_pd(v, b, _CMP_EQ_OQ))));
    }
    for (; i < n; ++i) {
        lt += d[i] < bound;
        eq += d[i] == bound;
    }
    *below = lt;
    *equal = eq;
}

}  // namespace

const KernelTable kAvx2Kernels{Isa::Avx2, euclidean, cg_interval, two_valued, hedgehog, count_below_equal};

}  // namespace knnlab::detail
