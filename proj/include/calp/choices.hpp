#pragma once

// Atomic and composite choices over probabilistic facts and belief domains,
// their measures, compatible worlds, splitting, and the capacity of a
// pairwise-incompatible choice set.

#include "calp/worlds.hpp"

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace calp {

/// (f, k): fact `fact` (index into GroundProgram::prob_facts) selected iff k = 1.
struct BayesianChoice {
    std::uint32_t fact = 0;
    bool selected = true;

    friend auto operator<=>(const BayesianChoice&, const BayesianChoice&) = default;
};

/// belief(D, B) with D an index into GroundProgram::domains.
struct BeliefChoice {
    std::uint32_t domain = 0;
    EventMask event;

    friend auto operator<=>(const BeliefChoice&, const BeliefChoice&) = default;
};

using AtomicChoice = std::variant<BayesianChoice, BeliefChoice>;

/// Consistent set of atomic choices, kept canonical: at most one Bayesian
/// choice per fact and one (intersected, non-empty) event per domain.
class CompositeChoice {
public:
    CompositeChoice() = default;

    /// nullopt if the choices are inconsistent.
    static std::optional<CompositeChoice> from(std::span<const AtomicChoice> choices);

    /// Adds a choice; returns false and leaves *this unchanged on inconsistency.
    bool add(const AtomicChoice& c);
    /// Union of two choices, nullopt if inconsistent.
    std::optional<CompositeChoice> unite(const CompositeChoice& o) const;

    void erase_fact(std::uint32_t fact) { bayes_.erase(fact); }
    void erase_domain(std::uint32_t domain) { beliefs_.erase(domain); }
    void set_event(std::uint32_t domain, EventMask e) { beliefs_[domain] = e; }

    const std::map<std::uint32_t, bool>& bayesian() const { return bayes_; }
    const std::map<std::uint32_t, EventMask>& beliefs() const { return beliefs_; }
    bool mentions_fact(std::uint32_t f) const { return bayes_.count(f) != 0; }
    bool mentions_domain(std::uint32_t d) const { return beliefs_.count(d) != 0; }
    std::size_t size() const { return bayes_.size() + beliefs_.size(); }
    bool empty() const { return size() == 0; }
    std::vector<AtomicChoice> atoms() const;

    /// World compatibility: chosen facts agree and each constrained domain's
    /// world event is a subset of the choice's event.
    bool admits(const BeliefWorld& w) const;

    /// True if every world admitted by `o` is admitted by *this, decided
    /// syntactically (Bayesian choices contained, events contained).
    bool dominates(const CompositeChoice& o) const;

    std::string str(const GroundProgram& g) const;

    friend auto operator<=>(const CompositeChoice&, const CompositeChoice&) = default;

private:
    std::map<std::uint32_t, bool> bayes_;
    std::map<std::uint32_t, EventMask> beliefs_;
};

/// Product of p over selected and (1-p) over deselected facts of Bay(kappa);
/// 1 for the empty choice. Throws ContractError on an unknown fact.
double rho_c(const CompositeChoice& kappa, const GroundProgram& g);

/// [rho_c, rho_c] times BP-upper of each constrained domain's event.
CapacityInterval rho_comp(const CompositeChoice& kappa, const GroundProgram& g);

/// Worlds admitted by kappa, in index order.
WorldSet compatible_worlds(const CompositeChoice& kappa, const GroundProgram& g,
                           std::uint64_t cap = default_world_cap, EventSpace space = EventSpace::all);

/// Worlds admitted by at least one member of K, in index order.
WorldSet compatible_worlds(std::span<const CompositeChoice> K, const GroundProgram& g,
                           std::uint64_t cap = default_world_cap, EventSpace space = EventSpace::all);

/// True iff k1 union k2 is inconsistent.
bool incompatible(const CompositeChoice& k1, const CompositeChoice& k2);

bool pairwise_incompatible(std::span<const CompositeChoice> K);

/// {kappa + (f,0), kappa + (f,1)}. Throws ContractError if kappa mentions f.
std::array<CompositeChoice, 2> split_on_fact(const CompositeChoice& kappa, std::uint32_t fact);

/// {kappa + belief(D,B), kappa + belief(D,not B)}. Throws ContractError if
/// kappa constrains D, or if B is empty, the whole frame, or outside it.
std::array<CompositeChoice, 2> split_on_belief(const CompositeChoice& kappa, std::uint32_t domain, EventMask event,
                                               const GroundProgram& g);

/// Controls the order in which splitting rules are applied.
struct SplitOrder {
    /// Unset: deterministic order (first compatible pair, Bayesian differences
    /// before belief ones, lowest fact/domain index first, both members split).
    /// Set: pairs, sides and split variables are drawn from a seeded generator.
    std::optional<std::uint64_t> seed;
};

/// Equivalent pairwise-incompatible set obtained by removing dominated
/// members and splitting compatible pairs until neither applies. The result
/// is sorted.
std::vector<CompositeChoice> make_pairwise_incompatible(std::vector<CompositeChoice> K, const GroundProgram& g,
                                                       const SplitOrder& order = {});

/// Capacity of a pairwise-incompatible set: members that differ only in the
/// event of one domain, and whose events do not cover that domain's frame,
/// are first combined into one member carrying the union of the events;
/// then rho_comp is summed. Throws ContractError if K is not pairwise
/// incompatible.
CapacityInterval xi_c(std::span<const CompositeChoice> K, const GroundProgram& g);

} // namespace calp
