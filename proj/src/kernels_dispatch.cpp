#include "calp/kernels.hpp"

#include "calp/error.hpp"

#include <cstdlib>
#include <string>

namespace calp::kernels {

namespace {

std::optional<Isa>& forced() {
    static std::optional<Isa> isa;
    return isa;
}

Isa probe() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
    if (const char* env = std::getenv("CALP_ISA"); env && std::string(env) == "scalar")
        return Isa::scalar;
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2"))
        return Isa::avx2;
#endif
    return Isa::scalar;
}

void check_size(std::size_t have, std::size_t bits, const char* what) {
    if (bits >= 8 * sizeof(std::size_t) || have != (std::size_t{1} << bits))
        throw ContractError(std::string(what) + ": table size must be 2^bits");
}

} // namespace

std::string_view to_string(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

Isa detected_isa() {
    static const Isa isa = probe();
    return isa;
}

Isa active_isa() {
    return forced().value_or(detected_isa());
}

void force_isa(std::optional<Isa> isa) {
    if (isa == Isa::avx2 && detected_isa() != Isa::avx2)
        throw ContractError("avx2 kernels are not supported on this CPU");
    forced() = isa;
}

void subset_sum(std::span<double> table, unsigned bits) {
    check_size(table.size(), bits, "subset_sum");
#if defined(__x86_64__) || defined(_M_X64)
    if (active_isa() == Isa::avx2)
        return avx2::subset_sum(table, bits);
#endif
    scalar::subset_sum(table, bits);
}

void subset_product(std::span<const double> probs, std::span<double> out) {
    check_size(out.size(), probs.size(), "subset_product");
#if defined(__x86_64__) || defined(_M_X64)
    if (active_isa() == Isa::avx2)
        return avx2::subset_product(probs, out);
#endif
    scalar::subset_product(probs, out);
}

} // namespace calp::kernels
