#pragma once

// Data-parallel kernels behind batch program evaluation, nearest-better
// distance rows and regression Gram accumulation.
//
// Every kernel has a scalar reference variant and, where the target allows,
// an AVX2 variant picked at runtime. Variants are required to be
// bit-identical: each output element is produced by the same sequence of
// correctly rounded IEEE operations (no FMA, no reassociation).

#include <cmath>
#include <cstddef>
#include <limits>
#include <string_view>

namespace eotf::simd {

/// Element semantics shared by the kernels and the tree-walking evaluator.
namespace ops {

/// NaN if either side is NaN, otherwise (a < b ? a : b).
inline double min(double a, double b) noexcept {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    return a < b ? a : b;
}

inline double max(double a, double b) noexcept {
    if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
    return a > b ? a : b;
}

}  // namespace ops

struct KernelTable {
    std::string_view name;

    // out[i] = a[i] (op) b[i]; out may alias a or b.
    void (*add)(const double* a, const double* b, double* out, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    void (*div)(const double* a, const double* b, double* out, std::size_t n);
    void (*min)(const double* a, const double* b, double* out, std::size_t n);
    void (*max)(const double* a, const double* b, double* out, std::size_t n);

    void (*neg)(const double* a, double* out, std::size_t n);
    void (*abs)(const double* a, double* out, std::size_t n);
    void (*sqrt)(const double* a, double* out, std::size_t n);
    void (*floor)(const double* a, double* out, std::size_t n);

    void (*fill)(double value, double* out, std::size_t n);

    /// acc[j] += (coord[j] - origin)^2
    void (*sq_dist_accumulate)(const double* coord, double origin, double* acc, std::size_t n);

    /// gram (p x p, row-major) += z^T z for the row-major n x p matrix z.
    void (*gram_accumulate)(const double* z, std::size_t n, std::size_t p, double* gram);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when AVX2 was not compiled in or the CPU lacks it.
const KernelTable* avx2_kernels() noexcept;

/// Best available table. EOTF_SIMD=scalar in the environment forces the
/// scalar reference.
const KernelTable& active_kernels() noexcept;

}  // namespace eotf::simd
