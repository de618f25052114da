#include "eotf/simd/kernels.hpp"

#include <cmath>

namespace eotf::simd {
namespace {

void add(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}
void div(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}
void min(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = ops::min(a[i], b[i]);
}
void max(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = ops::max(a[i], b[i]);
}
void neg(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = -a[i];
}
void abs(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(a[i]);
}
void sqrt(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(a[i]);
}
void floor(const double* a, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::floor(a[i]);
}
void fill(double value, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = value;
}
void sq_dist_accumulate(const double* coord, double origin, double* acc, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        const double d = coord[j] - origin;
        acc[j] += d * d;
    }
}
void gram_accumulate(const double* z, std::size_t n, std::size_t p, double* gram) {
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = z + r * p;
        for (std::size_t i = 0; i < p; ++i) {
            const double zi = row[i];
            double* g = gram + i * p;
            for (std::size_t j = 0; j < p; ++j) g[j] += zi * row[j];
        }
    }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
    static const KernelTable table{
        "scalar", add,  sub,   mul,  div, min, max, neg, abs, sqrt, floor, fill,
        sq_dist_accumulate, gram_accumulate,
    };
    return table;
}

}  // namespace eotf::simd
