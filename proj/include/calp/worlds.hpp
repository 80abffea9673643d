#pragma once

// Belief worlds and the world-side capacity pipeline: world capacity,
// domain partition, cell capacity, capacity of a world set, and query
// answering by filtering worlds.

#include "calp/grounding.hpp"
#include "calp/interval.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <vector>

namespace calp {

inline constexpr std::uint64_t default_world_cap = 10'000'000;

/// A world: chosen probabilistic facts (bitmask over GroundProgram::prob_facts)
/// and exactly one non-empty event per domain (indexed like GroundProgram::domains).
struct BeliefWorld {
    std::uint64_t facts = 0;
    std::vector<EventMask> events;

    WorldView view() const { return {facts, events}; }
    bool chooses(std::size_t fact) const { return (facts >> fact) & 1u; }

    /// Names of the chosen facts.
    std::vector<std::string> chosen_atoms(const GroundProgram& g) const;
    /// The world's canonical belief set.
    std::vector<BeliefFact> belief_set(const GroundProgram& g) const;

    friend auto operator<=>(const BeliefWorld&, const BeliefWorld&) = default;
};

using WorldSet = std::vector<BeliefWorld>;

/// Which events a world may carry per domain.
enum class EventSpace {
    all,   ///< every non-empty subset of the frame
    focal, ///< only focal sets of the domain
};

/// Dense numbering of the worlds of a program: fact mask major, domain
/// events minor (first domain most significant), events in increasing
/// bitmask order within a domain.
class WorldIndex {
public:
    /// Throws ResourceError if the world count exceeds `cap`.
    WorldIndex(const GroundProgram& g, std::uint64_t cap = default_world_cap, EventSpace space = EventSpace::all);

    std::uint64_t size() const { return size_; }
    std::uint64_t fact_combinations() const { return std::uint64_t{1} << facts_; }
    std::uint64_t events_per_fact_mask() const { return events_total_; }
    const std::vector<EventMask>& events_of(std::size_t domain) const { return events_[domain]; }

    BeliefWorld world(std::uint64_t index) const;
    std::uint64_t index(const BeliefWorld& w) const;
    /// Position of `e` in events_of(domain), or -1.
    long event_position(std::size_t domain, EventMask e) const;

    /// Calls fn(index, world) for every world in order; the world object is reused.
    void for_each(const std::function<void(std::uint64_t, const BeliefWorld&)>& fn) const;

private:
    std::size_t facts_ = 0;
    std::vector<std::vector<EventMask>> events_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t events_total_ = 1;
    std::uint64_t size_ = 0;
};

/// Number of worlds, saturating at UINT64_MAX.
std::uint64_t world_count(const GroundProgram& g, EventSpace space = EventSpace::all);

/// All worlds, in index order.
WorldSet enumerate_worlds(const GroundProgram& g, std::uint64_t cap = default_world_cap,
                          EventSpace space = EventSpace::all);

/// Point interval: product of p over chosen facts and (1-p) over the others.
CapacityInterval fact_capacity(const GroundProgram& g, std::uint64_t facts);

/// beta(w) = beta_prb(w) * product over domains of [Belief, Plaus] of w's event.
CapacityInterval world_capacity(const BeliefWorld& w, const GroundProgram& g);

/// Groups worlds by identical chosen facts; cells ordered by fact mask,
/// worlds within a cell keep their input order.
std::vector<WorldSet> dom_prtn(const WorldSet& s);

/// beta_prb of the shared facts times, per domain, BP-upper over the union of
/// the cell's events. Throws ContractError if the facts differ within the cell.
CapacityInterval cell_capacity(const WorldSet& cell, const GroundProgram& g);

/// Sum of cell capacities over dom_prtn(s); [0,0] for an empty set.
CapacityInterval xi_B(const WorldSet& s, const GroundProgram& g);

/// Per-world truth of q, indexed like WorldIndex(g, cap).
std::vector<std::uint8_t> satisfying_worlds(const GroundProgram& g, AtomId q, std::uint64_t cap = default_world_cap);

/// xi_B of the worlds whose model contains q. An atom absent from the
/// program is false everywhere.
CapacityInterval query_by_worlds(const GroundProgram& g, std::string_view q, std::uint64_t cap = default_world_cap);

} // namespace calp
