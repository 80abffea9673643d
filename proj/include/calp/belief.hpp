#pragma once

// Frames of discernment, mass functions and the belief/plausibility
// capacities they induce, plus the set-level operations on belief facts.

#include "calp/interval.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace calp {

inline constexpr unsigned max_frame_size = 16;

/// Subset of a frame, as a bitset over the frame's element order.
class EventMask {
public:
    constexpr EventMask() = default;
    constexpr explicit EventMask(std::uint32_t bits) : bits_(bits) {}

    static constexpr EventMask full(unsigned frame_size) {
        return EventMask(frame_size >= 32 ? ~0u : (1u << frame_size) - 1u);
    }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(unsigned element) const { return (bits_ >> element) & 1u; }
    constexpr bool subset_of(EventMask o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool disjoint(EventMask o) const { return (bits_ & o.bits_) == 0; }
    unsigned count() const { return static_cast<unsigned>(__builtin_popcount(bits_)); }

    friend constexpr EventMask operator&(EventMask a, EventMask b) { return EventMask(a.bits_ & b.bits_); }
    friend constexpr EventMask operator|(EventMask a, EventMask b) { return EventMask(a.bits_ | b.bits_); }
    /// Set difference.
    friend constexpr EventMask operator-(EventMask a, EventMask b) { return EventMask(a.bits_ & ~b.bits_); }

    friend constexpr auto operator<=>(EventMask, EventMask) = default;

private:
    std::uint32_t bits_ = 0;
};

/// Named, ordered, finite set of mutually exclusive outcomes.
class FrameOfDiscernment {
public:
    FrameOfDiscernment() = default;
    /// Throws DomainError if `elements` is empty, too large, or has duplicates.
    FrameOfDiscernment(std::string domain_id, std::vector<std::string> elements);

    const std::string& domain_id() const { return id_; }
    const std::vector<std::string>& elements() const { return elements_; }
    unsigned size() const { return static_cast<unsigned>(elements_.size()); }
    EventMask full() const { return EventMask::full(size()); }

    /// Index of `name` in the frame, or -1.
    int index_of(std::string_view name) const;
    /// Throws DomainError on unknown names.
    EventMask event(std::span<const std::string> names) const;
    std::vector<std::string> names(EventMask event) const;
    bool contains(EventMask event) const { return event.subset_of(full()); }
    EventMask complement(EventMask event) const { return full() - event; }

    friend bool operator==(const FrameOfDiscernment&, const FrameOfDiscernment&) = default;

private:
    std::string id_;
    std::vector<std::string> elements_;
};

struct FocalSet {
    EventMask event;
    double mass = 0.0;

    friend bool operator==(const FocalSet&, const FocalSet&) = default;
};

/// Belief domain: a frame plus a validated mass function.
///
/// Only focal sets are stored. Masses are rescaled to sum to 1 after
/// validation, and belief of every event is tabulated up front
/// (at most 2^16 entries).
class BeliefDomain {
public:
    /// Validation tolerance for the mass sum.
    static constexpr double mass_tolerance = 1e-9;

    BeliefDomain() = default;
    /// Throws DomainError if a focal set is empty, outside the frame, repeated,
    /// has mass outside (0,1], or if masses do not sum to 1 within tolerance.
    BeliefDomain(FrameOfDiscernment frame, std::vector<FocalSet> focal_sets);

    const std::string& id() const { return frame_.domain_id(); }
    const FrameOfDiscernment& frame() const { return frame_; }
    std::span<const FocalSet> focal_sets() const { return focal_; }

    /// Sum of masses of focal sets contained in `x`.
    double belief(EventMask x) const;
    /// 1 - belief(complement(x)).
    double plausibility(EventMask x) const;
    CapacityInterval capacity(EventMask x) const { return {belief(x), plausibility(x)}; }
    EventMask complement(EventMask x) const;

    /// True if some focal set meets both `x` and its complement.
    bool straddles(EventMask x) const;

private:
    void check(EventMask x) const;

    FrameOfDiscernment frame_;
    std::vector<FocalSet> focal_;
    std::vector<double> belief_table_;
};

using DomainMap = std::map<std::string, BeliefDomain, std::less<>>;

/// Evidence assertion belief(D, B).
struct BeliefFact {
    std::string domain;
    EventMask event;

    friend auto operator<=>(const BeliefFact&, const BeliefFact&) = default;
};

double belief(const BeliefDomain& dom, EventMask x);
double plausibility(const BeliefDomain& dom, EventMask x);
EventMask complement(const BeliefDomain& dom, EventMask x);

/// facts(D, S): the facts in `facts` whose domain is `domain`.
std::vector<BeliefFact> facts_of(std::string_view domain, std::span<const BeliefFact> facts);

/// One fact per domain present, carrying the intersection of that domain's
/// events. The result is sorted by domain and may contain empty events.
std::vector<BeliefFact> canonicalize(std::span<const BeliefFact> facts);

/// True iff canonicalize(facts) has no empty event.
bool is_consistent(std::span<const BeliefFact> facts);

/// Superset closure of a canonical, consistent fact set. Throws DomainError
/// for domains missing from `domains`.
std::vector<BeliefFact> complete(std::span<const BeliefFact> facts, const DomainMap& domains);

/// Upper belief-domain probability: [1,1] if no fact of `dom` is present,
/// else [belief, plausibility] of the union of those facts' events.
CapacityInterval bp_upper(const BeliefDomain& dom, std::span<const BeliefFact> facts);

} // namespace calp
