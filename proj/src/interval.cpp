#include "calp/interval.hpp"

#include "calp/error.hpp"

#include <ostream>
#include <string>

namespace calp {

CapacityInterval CapacityInterval::from_capacity(double belief, double plausibility, double tol) {
    if (!(belief >= -tol && belief <= plausibility + tol && plausibility <= 1.0 + tol))
        throw ContractError("not a belief/plausibility pair: [" + std::to_string(belief) + ", " +
                            std::to_string(plausibility) + "]");
    return {belief, plausibility};
}

CapacityInterval CapacityInterval::clamped_unit(bool* clamped) const {
    CapacityInterval r{std::clamp(lo_, 0.0, 1.0), std::clamp(hi_, 0.0, 1.0)};
    if (clamped)
        *clamped = (r.lo_ != lo_ || r.hi_ != hi_);
    return r;
}

CapacityInterval interval_product(std::span<const CapacityInterval> xs) {
    CapacityInterval acc = CapacityInterval::one();
    for (auto x : xs)
        acc *= x;
    return acc;
}

CapacityInterval interval_sum(std::span<const CapacityInterval> xs) {
    CapacityInterval acc = CapacityInterval::zero();
    for (auto x : xs)
        acc += x;
    return acc;
}

std::ostream& operator<<(std::ostream& os, CapacityInterval iv) {
    return os << '[' << iv.lo() << ", " << iv.hi() << ']';
}

} // namespace calp
