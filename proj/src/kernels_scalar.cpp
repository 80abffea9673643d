#include "calp/kernels.hpp"

#include <cstddef>

namespace calp::kernels::scalar {

void subset_sum(std::span<double> table, unsigned bits) {
    const std::size_t n = std::size_t{1} << bits;
    for (std::size_t step = 1; step < n; step <<= 1)
        for (std::size_t base = 0; base < n; base += 2 * step)
            for (std::size_t k = 0; k < step; ++k)
                table[base + step + k] += table[base + k];
}

void subset_product(std::span<const double> probs, std::span<double> out) {
    out[0] = 1.0;
    std::size_t len = 1;
    for (double p : probs) {
        const double q = 1.0 - p;
        for (std::size_t k = 0; k < len; ++k) {
            const double v = out[k];
            out[k + len] = v * p;
            out[k] = v * q;
        }
        len <<= 1;
    }
}

} // namespace calp::kernels::scalar
