#include "calp/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

#define CALP_AVX2 __attribute__((target("avx2")))

namespace calp::kernels::avx2 {

CALP_AVX2 void subset_sum(std::span<double> table, unsigned bits) {
    const std::size_t n = std::size_t{1} << bits;
    double* t = table.data();
    std::size_t step = 1;
    // Strides below one vector width stay scalar.
    for (; step < n && step < 4; step <<= 1)
        for (std::size_t base = 0; base < n; base += 2 * step)
            for (std::size_t k = 0; k < step; ++k)
                t[base + step + k] += t[base + k];
    for (; step < n; step <<= 1) {
        for (std::size_t base = 0; base < n; base += 2 * step) {
            double* lo = t + base;
            double* hi = t + base + step;
            for (std::size_t k = 0; k < step; k += 4) {
                __m256d a = _mm256_loadu_pd(lo + k);
                __m256d b = _mm256_loadu_pd(hi + k);
                _mm256_storeu_pd(hi + k, _mm256_add_pd(b, a));
            }
        }
    }
}

CALP_AVX2 void subset_product(std::span<const double> probs, std::span<double> out) {
    double* o = out.data();
    o[0] = 1.0;
    std::size_t len = 1;
    for (double p : probs) {
        const double q = 1.0 - p;
        if (len < 4) {
            for (std::size_t k = 0; k < len; ++k) {
                const double v = o[k];
                o[k + len] = v * p;
                o[k] = v * q;
            }
        } else {
            const __m256d vp = _mm256_set1_pd(p);
            const __m256d vq = _mm256_set1_pd(q);
            for (std::size_t k = 0; k < len; k += 4) {
                __m256d v = _mm256_loadu_pd(o + k);
                _mm256_storeu_pd(o + k + len, _mm256_mul_pd(v, vp));
                _mm256_storeu_pd(o + k, _mm256_mul_pd(v, vq));
            }
        }
        len <<= 1;
    }
}

} // namespace calp::kernels::avx2

#endif
