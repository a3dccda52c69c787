// Copyright 2026 knnlab contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <string>

#include "knnlab/error.hpp"
#include "tables.hpp"

namespace knnlab {

namespace {

bool cpu_has_avx2() {
#if defined(KNNLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const KernelTable& select_default() {
    if (const char* forced = std::getenv("KNNLAB_ISA")) {
        const std::string name(forced);
        if (name == "scalar") return kernels_for(Isa::Scalar);
        if (name == "avx2") return kernels_for(Isa::Avx2);
        throw UsageError("KNNLAB_ISA must be 'scalar' or 'avx2', got '" + name + "'");
    }
    return cpu_has_avx2() ? kernels_for(Isa::Avx2) : kernels_for(Isa::Scalar);
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out{Isa::Scalar};
    if (cpu_has_avx2()) out.push_back(Isa::Avx2);
    return out;
}

const KernelTable& kernels_for(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return detail::kScalarKernels;
        case Isa::Avx2:
#if defined(KNNLAB_HAVE_AVX2)
            if (cpu_has_avx2()) return detail::kAvx2Kernels;
#endif
            break;
    }
    throw UsageError("kernel variant '" + std::string(isa_name(isa)) + "' is not available on this CPU");
}

const KernelTable& active_kernels() {
    static const KernelTable& table = select_default();
    return table;
}

PackedPoints::PackedPoints(const SpaceSpec& spec, std::span<const PointCode> points) : spec_(spec), n_(points.size()) {
    validate(spec);
    for (const auto& p : points) validate_point(spec, p);
    if (const auto* e = std::get_if<EuclideanSpace>(&spec)) {
        const auto dim = static_cast<std::size_t>(e->dim);
        reals_.resize(dim * n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const auto& c = std::get<EuclideanPoint>(points[i]).coords;
            for (std::size_t k = 0; k < dim; ++k) reals_[k * n_ + i] = c[k];
        }
    } else if (std::holds_alternative<CGIntervalSpace>(spec)) {
        reals_.reserve(n_);
        for (const auto& p : points) reals_.push_back(std::get<UnitIntervalPoint>(p).x);
    } else if (std::holds_alternative<TwoValuedSpace>(spec)) {
        ints_.reserve(n_);
        for (const auto& p : points) ints_.push_back(std::get<DiscretePoint>(p).index);
    } else if (std::holds_alternative<HedgehogSpace>(spec)) {
        reals_.reserve(n_);
        ints_.reserve(n_);
        for (const auto& p : points) {
            const auto& h = std::get<HedgehogPoint>(p);
            ints_.push_back(h.spine);
            reals_.push_back(h.t);
        }
    } else {
        sparse_.reserve(n_);
        for (const auto& p : points) sparse_.push_back(std::get<SparsePoint>(p));
    }
}

void PackedPoints::distances_to(const PointCode& query, std::span<double> out, const KernelTable& k) const {
    if (out.size() != n_) throw UsageError("distance buffer size does not match sample size");
    validate_point(spec_, query);
    if (const auto* e = std::get_if<EuclideanSpace>(&spec_)) {
        k.euclidean(reals_.data(), n_, static_cast<std::size_t>(e->dim), std::get<EuclideanPoint>(query).coords.data(),
                    out.data());
    } else if (std::holds_alternative<CGIntervalSpace>(spec_)) {
        k.cg_interval(reals_.data(), n_, std::get<UnitIntervalPoint>(query).x, out.data());
    } else if (const auto* tv = std::get_if<TwoValuedSpace>(&spec_)) {
        k.two_valued(ints_.data(), n_, std::get<DiscretePoint>(query).index, tv->r, out.data());
    } else if (std::holds_alternative<HedgehogSpace>(spec_)) {
        const auto& h = std::get<HedgehogPoint>(query);
        k.hedgehog(ints_.data(), reals_.data(), n_, h.spine, h.t, out.data());
    } else {
        for (std::size_t i = 0; i < n_; ++i) out[i] = distance(spec_, sparse_[i], query);
    }
}

}  // namespace knnlab
