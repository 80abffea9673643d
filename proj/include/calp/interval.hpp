#pragma once

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <span>

namespace calp {

/// Closed interval [lo, hi] carrying a (belief, plausibility) pair.
///
/// Both endpoints are nonnegative, so the product of two intervals is the
/// product of their endpoints. `hi` may exceed 1 after addition; reporting
/// code clamps at the very end.
class CapacityInterval {
public:
    constexpr CapacityInterval() = default;
    constexpr CapacityInterval(double lo, double hi) : lo_(lo), hi_(hi) {}

    /// Builds an interval from a belief/plausibility pair and checks the
    /// capacity invariants (0 <= lo <= hi <= 1, up to `tol`).
    static CapacityInterval from_capacity(double belief, double plausibility, double tol = 1e-9);

    static constexpr CapacityInterval point(double p) { return {p, p}; }
    static constexpr CapacityInterval one() { return {1.0, 1.0}; }
    static constexpr CapacityInterval zero() { return {0.0, 0.0}; }

    constexpr double lo() const { return lo_; }
    constexpr double hi() const { return hi_; }
    /// Belief projection.
    constexpr double belief() const { return lo_; }
    /// Plausibility projection.
    constexpr double plausibility() const { return hi_; }

    friend constexpr CapacityInterval operator*(CapacityInterval a, CapacityInterval b) {
        return {a.lo_ * b.lo_, a.hi_ * b.hi_};
    }
    friend constexpr CapacityInterval operator+(CapacityInterval a, CapacityInterval b) {
        return {a.lo_ + b.lo_, a.hi_ + b.hi_};
    }
    CapacityInterval& operator*=(CapacityInterval o) { return *this = *this * o; }
    CapacityInterval& operator+=(CapacityInterval o) { return *this = *this + o; }

    friend constexpr bool operator==(CapacityInterval, CapacityInterval) = default;

    bool near(CapacityInterval o, double tol = 1e-9) const {
        return std::fabs(lo_ - o.lo_) <= tol && std::fabs(hi_ - o.hi_) <= tol;
    }

    /// Truncates both endpoints into [0,1]; `clamped` reports whether anything moved.
    CapacityInterval clamped_unit(bool* clamped = nullptr) const;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline constexpr CapacityInterval interval_mul(CapacityInterval a, CapacityInterval b) { return a * b; }
inline constexpr CapacityInterval interval_add(CapacityInterval a, CapacityInterval b) { return a + b; }

/// Product over a sequence; [1,1] for an empty span.
CapacityInterval interval_product(std::span<const CapacityInterval> xs);
/// Sum over a sequence; [0,0] for an empty span.
CapacityInterval interval_sum(std::span<const CapacityInterval> xs);

std::ostream& operator<<(std::ostream& os, CapacityInterval iv);

} // namespace calp
