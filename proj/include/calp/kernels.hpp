#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and,
// on x86-64, an AVX2 version; the dispatching entry points pick one at run
// time. Both versions perform the same additions and multiplications in the
// same order, so results are bitwise identical.

#include <optional>
#include <span>
#include <string_view>

namespace calp::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set supported by the running CPU.
Isa detected_isa();
/// Instruction set the dispatchers currently use.
Isa active_isa();
/// Pins the dispatchers to `isa` (must be supported); nullopt restores detection.
/// Not thread-safe; meant for tests and benchmarks.
void force_isa(std::optional<Isa> isa);

/// Zeta transform over the subset lattice, in place:
/// on return table[m] = sum of the input table[s] over all s that are subsets of m.
/// table.size() must be 1 << bits.
void subset_sum(std::span<double> table, unsigned bits);

/// Weight of every subset of independent facts:
/// out[m] = prod_{i in m} probs[i] * prod_{i not in m} (1 - probs[i]).
/// out.size() must be 1 << probs.size().
void subset_product(std::span<const double> probs, std::span<double> out);

namespace scalar {
void subset_sum(std::span<double> table, unsigned bits);
void subset_product(std::span<const double> probs, std::span<double> out);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void subset_sum(std::span<double> table, unsigned bits);
void subset_product(std::span<const double> probs, std::span<double> out);
} // namespace avx2
#endif

} // namespace calp::kernels
