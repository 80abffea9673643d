#include "calp/worlds.hpp"

#include "calp/error.hpp"
#include "calp/kernels.hpp"

#include <limits>
#include <map>

namespace calp {

namespace {

constexpr std::uint64_t saturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > saturated / a)
        return saturated;
    return a * b;
}

std::vector<EventMask> domain_events(const BeliefDomain& d, EventSpace space) {
    std::vector<EventMask> out;
    if (space == EventSpace::focal) {
        for (const auto& f : d.focal_sets())
            out.push_back(f.event);
    } else {
        for (std::uint32_t bits = 1; bits <= d.frame().full().bits(); ++bits)
            out.push_back(EventMask(bits));
    }
    return out;
}

// Per-fact-mask weights, tabulated with the data-parallel kernel when the
// table is small enough.
class FactWeights {
public:
    explicit FactWeights(const GroundProgram& g) : g_(g) {
        if (g.prob_facts.size() <= 22) {
            std::vector<double> probs;
            for (const auto& f : g.prob_facts)
                probs.push_back(f.prob);
            table_.resize(std::size_t{1} << probs.size());
            kernels::subset_product(probs, table_);
        }
    }
    double operator()(std::uint64_t mask) const {
        return table_.empty() ? fact_capacity(g_, mask).lo() : table_[mask];
    }

private:
    const GroundProgram& g_;
    std::vector<double> table_;
};

} // namespace

std::vector<std::string> BeliefWorld::chosen_atoms(const GroundProgram& g) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.prob_facts.size(); ++i)
        if (chooses(i))
            out.push_back(g.atom_name(g.prob_facts[i].atom));
    return out;
}

std::vector<BeliefFact> BeliefWorld::belief_set(const GroundProgram& g) const {
    std::vector<BeliefFact> out;
    for (std::size_t d = 0; d < events.size(); ++d)
        out.push_back({g.domains[d].id(), events[d]});
    return out;
}

std::uint64_t world_count(const GroundProgram& g, EventSpace space) {
    if (g.prob_facts.size() >= 64)
        return saturated;
    std::uint64_t n = std::uint64_t{1} << g.prob_facts.size();
    for (const auto& d : g.domains)
        n = mul_sat(n, domain_events(d, space).size());
    return n;
}

WorldIndex::WorldIndex(const GroundProgram& g, std::uint64_t cap, EventSpace space) : facts_(g.prob_facts.size()) {
    const std::uint64_t n = world_count(g, space);
    if (n > cap)
        throw ResourceError("program has " + (n == saturated ? std::string("more than 2^64") : std::to_string(n)) +
                            " worlds, above the cap of " + std::to_string(cap));
    size_ = n;
    for (const auto& d : g.domains)
        events_.push_back(domain_events(d, space));
    strides_.assign(events_.size(), 1);
    for (std::size_t d = events_.size(); d-- > 0;) {
        strides_[d] = events_total_;
        events_total_ *= events_[d].size();
    }
}

BeliefWorld WorldIndex::world(std::uint64_t index) const {
    BeliefWorld w;
    w.facts = index / events_total_;
    std::uint64_t rest = index % events_total_;
    w.events.resize(events_.size());
    for (std::size_t d = 0; d < events_.size(); ++d) {
        w.events[d] = events_[d][rest / strides_[d]];
        rest %= strides_[d];
    }
    return w;
}

long WorldIndex::event_position(std::size_t domain, EventMask e) const {
    const auto& ev = events_[domain];
    auto it = std::lower_bound(ev.begin(), ev.end(), e);
    return it != ev.end() && *it == e ? static_cast<long>(it - ev.begin()) : -1;
}

std::uint64_t WorldIndex::index(const BeliefWorld& w) const {
    std::uint64_t idx = w.facts * events_total_;
    for (std::size_t d = 0; d < events_.size(); ++d) {
        const long pos = event_position(d, w.events[d]);
        if (pos < 0)
            throw ContractError("world event is outside the enumerated event space");
        idx += static_cast<std::uint64_t>(pos) * strides_[d];
    }
    return idx;
}

void WorldIndex::for_each(const std::function<void(std::uint64_t, const BeliefWorld&)>& fn) const {
    BeliefWorld w;
    w.events.resize(events_.size());
    std::vector<std::size_t> pos(events_.size(), 0);
    std::uint64_t idx = 0;
    for (std::uint64_t mask = 0; mask < fact_combinations(); ++mask) {
        w.facts = mask;
        std::fill(pos.begin(), pos.end(), 0);
        for (std::uint64_t k = 0; k < events_total_; ++k, ++idx) {
            for (std::size_t d = 0; d < events_.size(); ++d)
                w.events[d] = events_[d][pos[d]];
            fn(idx, w);
            // odometer, last domain fastest
            for (std::size_t d = events_.size(); d-- > 0;) {
                if (++pos[d] < events_[d].size())
                    break;
                pos[d] = 0;
            }
        }
    }
}

WorldSet enumerate_worlds(const GroundProgram& g, std::uint64_t cap, EventSpace space) {
    WorldIndex idx(g, cap, space);
    WorldSet out;
    out.reserve(idx.size());
    idx.for_each([&](std::uint64_t, const BeliefWorld& w) { out.push_back(w); });
    return out;
}

CapacityInterval fact_capacity(const GroundProgram& g, std::uint64_t facts) {
    double p = 1.0;
    for (std::size_t i = 0; i < g.prob_facts.size(); ++i)
        p *= ((facts >> i) & 1u) ? g.prob_facts[i].prob : 1.0 - g.prob_facts[i].prob;
    return CapacityInterval::point(p);
}

CapacityInterval world_capacity(const BeliefWorld& w, const GroundProgram& g) {
    if (w.events.size() != g.domains.size())
        throw ContractError("world does not carry one event per domain");
    CapacityInterval blf = CapacityInterval::one();
    for (std::size_t d = 0; d < g.domains.size(); ++d)
        blf *= g.domains[d].capacity(w.events[d]);
    return fact_capacity(g, w.facts) * blf;
}

std::vector<WorldSet> dom_prtn(const WorldSet& s) {
    std::map<std::uint64_t, WorldSet> cells;
    for (const auto& w : s)
        cells[w.facts].push_back(w);
    std::vector<WorldSet> out;
    out.reserve(cells.size());
    for (auto& [mask, cell] : cells)
        out.push_back(std::move(cell));
    return out;
}

namespace {

CapacityInterval cell_from_unions(const GroundProgram& g, double fact_weight, const std::vector<EventMask>& unions,
                                  const std::vector<bool>& present) {
    CapacityInterval c = CapacityInterval::point(fact_weight);
    for (std::size_t d = 0; d < g.domains.size(); ++d)
        if (present[d])
            c *= g.domains[d].capacity(unions[d]);
    return c;
}

} // namespace

CapacityInterval cell_capacity(const WorldSet& cell, const GroundProgram& g) {
    if (cell.empty())
        return CapacityInterval::zero();
    std::vector<EventMask> unions(g.domains.size());
    std::vector<bool> present(g.domains.size(), false);
    for (const auto& w : cell) {
        if (w.facts != cell.front().facts)
            throw ContractError("cell mixes worlds with different probabilistic facts");
        if (w.events.size() != g.domains.size())
            throw ContractError("world does not carry one event per domain");
        for (std::size_t d = 0; d < w.events.size(); ++d) {
            unions[d] = unions[d] | w.events[d];
            present[d] = true;
        }
    }
    return cell_from_unions(g, fact_capacity(g, cell.front().facts).lo(), unions, present);
}

CapacityInterval xi_B(const WorldSet& s, const GroundProgram& g) {
    CapacityInterval acc = CapacityInterval::zero();
    for (const auto& cell : dom_prtn(s))
        acc += cell_capacity(cell, g);
    return acc;
}

std::vector<std::uint8_t> satisfying_worlds(const GroundProgram& g, AtomId q, std::uint64_t cap) {
    WorldIndex idx(g, cap);
    ModelEvaluator ev(g);
    std::vector<std::uint8_t> sat(idx.size(), 0);
    idx.for_each([&](std::uint64_t i, const BeliefWorld& w) { sat[i] = ev.entails(w.view(), q) ? 1 : 0; });
    return sat;
}

CapacityInterval query_by_worlds(const GroundProgram& g, std::string_view q, std::uint64_t cap) {
    WorldIndex idx(g, cap);
    auto atom = g.find_atom(q);
    if (!atom)
        return CapacityInterval::zero();
    ModelEvaluator ev(g);
    const FactWeights weights(g);

    // Cells are folded on the fly: per fact mask, the union of events per domain.
    struct Cell {
        std::vector<EventMask> unions;
        std::vector<bool> present;
    };
    std::map<std::uint64_t, Cell> cells;
    idx.for_each([&](std::uint64_t, const BeliefWorld& w) {
        if (!ev.entails(w.view(), *atom))
            return;
        auto [it, fresh] = cells.try_emplace(w.facts);
        Cell& c = it->second;
        if (fresh) {
            c.unions.assign(g.domains.size(), EventMask{});
            c.present.assign(g.domains.size(), false);
        }
        for (std::size_t d = 0; d < w.events.size(); ++d) {
            c.unions[d] = c.unions[d] | w.events[d];
            c.present[d] = true;
        }
    });
    CapacityInterval acc = CapacityInterval::zero();
    for (const auto& [mask, c] : cells)
        acc += cell_from_unions(g, weights(mask), c.unions, c.present);
    return acc;
}

} // namespace calp
