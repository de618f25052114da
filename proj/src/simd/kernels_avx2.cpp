// Compiled with -mavx2 only; callers reach it through avx2_kernels(), which
// checks the CPU first.
#include <immintrin.h>

#include <limits>

#include "eotf/simd/kernels.hpp"

namespace eotf::simd {

namespace {

template <class Op>
inline void binary(const double* a, const double* b, double* out, std::size_t n, Op op) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    if (i < n) {
        alignas(32) double ta[4] = {0, 0, 0, 0};
        alignas(32) double tb[4] = {0, 0, 0, 0};
        alignas(32) double to[4];
        for (std::size_t k = 0; i + k < n; ++k) {
            ta[k] = a[i + k];
            tb[k] = b[i + k];
        }
        _mm256_store_pd(to, op(_mm256_load_pd(ta), _mm256_load_pd(tb)));
        for (std::size_t k = 0; i + k < n; ++k) out[i + k] = to[k];
    }
}

template <class Op>
inline void unary(const double* a, double* out, std::size_t n, Op op) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, op(_mm256_loadu_pd(a + i)));
    if (i < n) {
        alignas(32) double ta[4] = {0, 0, 0, 0};
        alignas(32) double to[4];
        for (std::size_t k = 0; i + k < n; ++k) ta[k] = a[i + k];
        _mm256_store_pd(to, op(_mm256_load_pd(ta)));
        for (std::size_t k = 0; i + k < n; ++k) out[i + k] = to[k];
    }
}

inline __m256d sign_mask() { return _mm256_set1_pd(-0.0); }

// _mm256_min_pd(a, b) is (a < b ? a : b); NaN in either lane is patched in.
inline __m256d nan_patch(__m256d r, __m256d a, __m256d b) {
    const __m256d unordered = _mm256_cmp_pd(a, b, _CMP_UNORD_Q);
    return _mm256_blendv_pd(r, _mm256_set1_pd(std::numeric_limits<double>::quiet_NaN()),
                            unordered);
}

void add(const double* a, const double* b, double* out, std::size_t n) {
    binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_add_pd(x, y); });
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
    binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_sub_pd(x, y); });
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
    binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_mul_pd(x, y); });
}
void div(const double* a, const double* b, double* out, std::size_t n) {
    binary(a, b, out, n, [](__m256d x, __m256d y) { return _mm256_div_pd(x, y); });
}
void min(const double* a, const double* b, double* out, std::size_t n) {
    binary(a, b, out, n,
           [](__m256d x, __m256d y) { return nan_patch(_mm256_min_pd(x, y), x, y); });
}
void max(const double* a, const double* b, double* out, std::size_t n) {
    binary(a, b, out, n,
           [](__m256d x, __m256d y) { return nan_patch(_mm256_max_pd(x, y), x, y); });
}
void neg(const double* a, double* out, std::size_t n) {
    unary(a, out, n, [](__m256d x) { return _mm256_xor_pd(x, sign_mask()); });
}
void abs(const double* a, double* out, std::size_t n) {
    unary(a, out, n, [](__m256d x) { return _mm256_andnot_pd(sign_mask(), x); });
}
void sqrt(const double* a, double* out, std::size_t n) {
    unary(a, out, n, [](__m256d x) { return _mm256_sqrt_pd(x); });
}
void floor(const double* a, double* out, std::size_t n) {
    unary(a, out, n, [](__m256d x) { return _mm256_round_pd(x, _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC); });
}
void fill(double value, double* out, std::size_t n) {
    const __m256d v = _mm256_set1_pd(value);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, v);
    for (; i < n; ++i) out[i] = value;
}

void sq_dist_accumulate(const double* coord, double origin, double* acc, std::size_t n) {
    const __m256d o = _mm256_set1_pd(origin);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(coord + j), o);
        _mm256_storeu_pd(acc + j, _mm256_add_pd(_mm256_loadu_pd(acc + j), _mm256_mul_pd(d, d)));
    }
    for (; j < n; ++j) {
        const double d = coord[j] - origin;
        acc[j] += d * d;
    }
}

void gram_accumulate(const double* z, std::size_t n, std::size_t p, double* gram) {
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = z + r * p;
        for (std::size_t i = 0; i < p; ++i) {
            const __m256d zi = _mm256_set1_pd(row[i]);
            double* g = gram + i * p;
            std::size_t j = 0;
            for (; j + 4 <= p; j += 4) {
                const __m256d prod = _mm256_mul_pd(zi, _mm256_loadu_pd(row + j));
                _mm256_storeu_pd(g + j, _mm256_add_pd(_mm256_loadu_pd(g + j), prod));
            }
            for (; j < p; ++j) g[j] += row[i] * row[j];
        }
    }
}

}  // namespace

const KernelTable& avx2_table() noexcept {
    static const KernelTable table{
        "avx2", add,  sub,   mul,  div, min, max, neg, abs, sqrt, floor, fill,
        sq_dist_accumulate, gram_accumulate,
    };
    return table;
}

}  // namespace eotf::simd
