// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Batch distance kernels. Every routine exists as a scalar reference and,
// where the target supports it, as an AVX2 variant; the variant is chosen
// once at runtime. Variants vectorize across sample points and keep the
// per-point operation order of the scalar code, so results are bit-identical.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "knnlab/space.hpp"

namespace knnlab {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
    Isa isa;
    /// coords is dimension-major: coords[k * n + i] is coordinate k of point i.
    void (*euclidean)(const double* coords, std::size_t n, std::size_t dim, const double* query, double* out);
    void (*cg_interval)(const double* xs, std::size_t n, double query, double* out);
    void (*two_valued)(const std::int64_t* idx, std::size_t n, std::int64_t query, double r, double* out);
    void (*hedgehog)(const std::int64_t* spine, const double* t, std::size_t n, std::int64_t query_spine,
                     double query_t, double* out);
    /// Counts entries strictly below and exactly equal to bound.
    void (*count_below_equal)(const double* d, std::size_t n, double bound, std::size_t* below, std::size_t* equal);
};

/// ISAs usable on this machine, Scalar first.
std::vector<Isa> available_isas();

/// Table for a specific ISA; throws UsageError if the CPU lacks it.
const KernelTable& kernels_for(Isa isa);

/// The fastest available table, unless KNNLAB_ISA=scalar|avx2 overrides it.
const KernelTable& active_kernels();

/// Structure-of-arrays copy of a point list, laid out for the kernels.
class PackedPoints {
public:
    PackedPoints() = default;
    PackedPoints(const SpaceSpec& spec, std::span<const PointCode> points);

    const SpaceSpec& spec() const { return spec_; }
    std::size_t size() const { return n_; }

    /// out.size() must equal size().
    void distances_to(const PointCode& query, std::span<double> out, const KernelTable& kernels) const;
    void distances_to(const PointCode& query, std::span<double> out) const {
        distances_to(query, out, active_kernels());
    }

private:
    SpaceSpec spec_;
    std::size_t n_ = 0;
    std::vector<double> reals_;          // euclidean coords, cg x, or hedgehog t
    std::vector<std::int64_t> ints_;     // two-valued index or hedgehog spine
    std::vector<SparsePoint> sparse_;    // c00 has no packed form
};

}  // namespace knnlab
