// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "tables.hpp"

namespace knnlab::detail {

namespace {

void euclidean(const double* coords, std::size_t n, std::size_t dim, const double* query, double* out) {
    if (dim == 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(coords[i] - query[0]);
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            const double diff = coords[k * n + i] - query[k];
            acc = acc + diff * diff;
        }
        out[i] = std::sqrt(acc);
    }
}

void cg_interval(const double* xs, std::size_t n, double query, double* out) {
    const bool query_zero = query == 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        out[i] = x == query ? 0.0 : ((query_zero || x == 0.0) ? 1.0 : 2.0);
    }
}

void two_valued(const std::int64_t* idx, std::size_t n, std::int64_t query, double r, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = idx[i] == query ? 0.0 : r;
}

void hedgehog(const std::int64_t* spine, const double* t, std::size_t n, std::int64_t query_spine, double query_t,
              double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = spine[i] == query_spine ? std::fabs(t[i] - query_t) : t[i] + query_t;
}

void count_below_equal(const double* d, std::size_t n, double bound, std::size_t* below, std::size_t* equal) {
    std::size_t b = 0, e = 0;
    for (std::size_t i = 0; i < n; ++i) {
        b += d[i] < bound;
        e += d[i] == bound;
    }
    *below = b;
    *equal = e;
}

}  // namespace

const KernelTable kScalarKernels{Isa::Scalar, euclidean, cg_interval, two_valued, hedgehog, count_below_equal};

}  // namespace knnlab::detail
