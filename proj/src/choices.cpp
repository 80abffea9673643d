#include "calp/choices.hpp"

#include "calp/error.hpp"

#include <algorithm>
#include <random>

namespace calp {

std::optional<CompositeChoice> CompositeChoice::from(std::span<const AtomicChoice> choices) {
    CompositeChoice k;
    for (const auto& c : choices)
        if (!k.add(c))
            return std::nullopt;
    return k;
}

bool CompositeChoice::add(const AtomicChoice& c) {
    if (const auto* b = std::get_if<BayesianChoice>(&c)) {
        auto [it, fresh] = bayes_.try_emplace(b->fact, b->selected);
        return fresh || it->second == b->selected;
    }
    const auto& bel = std::get<BeliefChoice>(c);
    auto it = beliefs_.find(bel.domain);
    const EventMask e = it == beliefs_.end() ? bel.event : it->second & bel.event;
    if (e.empty())
        return false;
    beliefs_[bel.domain] = e;
    return true;
}

std::optional<CompositeChoice> CompositeChoice::unite(const CompositeChoice& o) const {
    CompositeChoice k = *this;
    for (const auto& [f, sel] : o.bayes_)
        if (!k.add(BayesianChoice{f, sel}))
            return std::nullopt;
    for (const auto& [d, e] : o.beliefs_)
        if (!k.add(BeliefChoice{d, e}))
            return std::nullopt;
    return k;
}

std::vector<AtomicChoice> CompositeChoice::atoms() const {
    std::vector<AtomicChoice> out;
    for (const auto& [f, sel] : bayes_)
        out.emplace_back(BayesianChoice{f, sel});
    for (const auto& [d, e] : beliefs_)
        out.emplace_back(BeliefChoice{d, e});
    return out;
}

bool CompositeChoice::admits(const BeliefWorld& w) const {
    for (const auto& [f, sel] : bayes_)
        if (w.chooses(f) != sel)
            return false;
    for (const auto& [d, e] : beliefs_)
        if (d >= w.events.size() || !w.events[d].subset_of(e))
            return false;
    return true;
}

bool CompositeChoice::dominates(const CompositeChoice& o) const {
    for (const auto& [f, sel] : bayes_) {
        auto it = o.bayes_.find(f);
        if (it == o.bayes_.end() || it->second != sel)
            return false;
    }
    for (const auto& [d, e] : beliefs_) {
        auto it = o.beliefs_.find(d);
        if (it == o.beliefs_.end() || !it->second.subset_of(e))
            return false;
    }
    return true;
}

std::string CompositeChoice::str(const GroundProgram& g) const {
    std::string s = "{";
    const char* sep = "";
    for (const auto& [f, sel] : bayes_) {
        s += sep + std::string("(") + g.atom_name(g.prob_facts.at(f).atom) + "," + (sel ? "1" : "0") + ")";
        sep = ", ";
    }
    for (const auto& [d, e] : beliefs_) {
        const auto& dom = g.domains.at(d);
        s += sep + std::string("belief(") + dom.id() + ",[";
        auto names = dom.frame().names(e);
        for (std::size_t i = 0; i < names.size(); ++i)
            s += (i ? "," : "") + names[i];
        s += "])";
        sep = ", ";
    }
    return s + "}";
}

double rho_c(const CompositeChoice& kappa, const GroundProgram& g) {
    double p = 1.0;
    for (const auto& [f, sel] : kappa.bayesian()) {
        if (f >= g.prob_facts.size())
            throw ContractError("choice on unknown probabilistic fact #" + std::to_string(f));
        p *= sel ? g.prob_facts[f].prob : 1.0 - g.prob_facts[f].prob;
    }
    return p;
}

CapacityInterval rho_comp(const CompositeChoice& kappa, const GroundProgram& g) {
    CapacityInterval c = CapacityInterval::point(rho_c(kappa, g));
    for (const auto& [d, e] : kappa.beliefs()) {
        if (d >= g.domains.size())
            throw ContractError("choice on unknown belief domain #" + std::to_string(d));
        const BeliefFact fact{g.domains[d].id(), e};
        c *= bp_upper(g.domains[d], std::span(&fact, 1));
    }
    return c;
}

WorldSet compatible_worlds(const CompositeChoice& kappa, const GroundProgram& g, std::uint64_t cap,
                           EventSpace space) {
    return compatible_worlds(std::span(&kappa, 1), g, cap, space);
}

WorldSet compatible_worlds(std::span<const CompositeChoice> K, const GroundProgram& g, std::uint64_t cap,
                           EventSpace space) {
    WorldIndex idx(g, cap, space);
    WorldSet out;
    idx.for_each([&](std::uint64_t, const BeliefWorld& w) {
        if (std::any_of(K.begin(), K.end(), [&](const CompositeChoice& k) { return k.admits(w); }))
            out.push_back(w);
    });
    return out;
}

bool incompatible(const CompositeChoice& k1, const CompositeChoice& k2) {
    return !k1.unite(k2).has_value();
}

bool pairwise_incompatible(std::span<const CompositeChoice> K) {
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = i + 1; j < K.size(); ++j)
            if (K[i] != K[j] && !incompatible(K[i], K[j]))
                return false;
    return true;
}

std::array<CompositeChoice, 2> split_on_fact(const CompositeChoice& kappa, std::uint32_t fact) {
    if (kappa.mentions_fact(fact))
        throw ContractError("cannot split on a fact the choice already fixes");
    std::array<CompositeChoice, 2> out{kappa, kappa};
    out[0].add(BayesianChoice{fact, false});
    out[1].add(BayesianChoice{fact, true});
    return out;
}

std::array<CompositeChoice, 2> split_on_belief(const CompositeChoice& kappa, std::uint32_t domain, EventMask event,
                                               const GroundProgram& g) {
    if (domain >= g.domains.size())
        throw ContractError("unknown belief domain #" + std::to_string(domain));
    if (kappa.mentions_domain(domain))
        throw ContractError("cannot split on a domain the choice already constrains");
    const EventMask full = g.domains[domain].frame().full();
    if (event.empty() || !event.subset_of(full) || event == full)
        throw ContractError("split event must be a non-empty proper subset of the frame");
    std::array<CompositeChoice, 2> out{kappa, kappa};
    out[0].add(BeliefChoice{domain, event});
    out[1].add(BeliefChoice{domain, full - event});
    return out;
}

namespace {

void canonical(std::vector<CompositeChoice>& K) {
    std::sort(K.begin(), K.end());
    K.erase(std::unique(K.begin(), K.end()), K.end());
}

// Choices of `from` on variables `to` leaves free, Bayesian ones first.
std::vector<AtomicChoice> free_differences(const CompositeChoice& from, const CompositeChoice& to) {
    std::vector<AtomicChoice> out;
    for (const auto& [f, sel] : from.bayesian())
        if (!to.mentions_fact(f))
            out.emplace_back(BayesianChoice{f, sel});
    for (const auto& [d, e] : from.beliefs())
        if (!to.mentions_domain(d))
            out.emplace_back(BeliefChoice{d, e});
    return out;
}

// Replacement of `k` by its split on the variable of `c`.
std::vector<CompositeChoice> split_on(const CompositeChoice& k, const AtomicChoice& c, const GroundProgram& g) {
    if (const auto* b = std::get_if<BayesianChoice>(&c)) {
        auto s = split_on_fact(k, b->fact);
        return {s[0], s[1]};
    }
    const auto& bel = std::get<BeliefChoice>(c);
    if (bel.event == g.domains.at(bel.domain).frame().full()) {
        CompositeChoice only = k;
        only.add(bel);
        return {only};
    }
    auto s = split_on_belief(k, bel.domain, bel.event, g);
    return {s[0], s[1]};
}

// Domains both constrain where k's event is not inside other's.
std::vector<std::uint32_t> refinable_domains(const CompositeChoice& k, const CompositeChoice& other) {
    std::vector<std::uint32_t> out;
    for (const auto& [d, e] : k.beliefs()) {
        auto it = other.beliefs().find(d);
        if (it != other.beliefs().end() && !e.subset_of(it->second))
            out.push_back(d);
    }
    return out;
}

// k's event on d cut along other's event on d.
std::vector<CompositeChoice> refine(const CompositeChoice& k, const CompositeChoice& other, std::uint32_t d) {
    const EventMask mine = k.beliefs().at(d);
    const EventMask theirs = other.beliefs().at(d);
    std::vector<CompositeChoice> out;
    for (EventMask part : {mine & theirs, mine - theirs}) {
        if (part.empty())
            continue;
        CompositeChoice c = k;
        c.set_event(d, part);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace

std::vector<CompositeChoice> make_pairwise_incompatible(std::vector<CompositeChoice> K, const GroundProgram& g,
                                                       const SplitOrder& order) {
    std::mt19937_64 rng(order.seed.value_or(0));
    auto pick = [&](std::size_t n) -> std::size_t {
        if (!order.seed || n <= 1)
            return 0;
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    };

    canonical(K);
    for (;;) {
        bool dropped = false;
        for (std::size_t i = 0; i < K.size() && !dropped; ++i)
            for (std::size_t j = 0; j < K.size(); ++j)
                if (i != j && K[i].dominates(K[j])) {
                    K.erase(K.begin() + static_cast<long>(j));
                    dropped = true;
                    break;
                }
        if (dropped)
            continue;

        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < K.size(); ++i)
            for (std::size_t j = i + 1; j < K.size(); ++j)
                if (!incompatible(K[i], K[j])) {
                    pairs.emplace_back(i, j);
                    if (!order.seed)
                        break;
                }
        if (pairs.empty())
            break;
        auto [i, j] = pairs[pick(pairs.size())];
        if (order.seed && pick(2) == 1)
            std::swap(i, j);
        const CompositeChoice a = K[i], b = K[j];

        const auto for_b = free_differences(a, b);
        const auto for_a = free_differences(b, a);
        std::vector<CompositeChoice> next;
        std::vector<std::size_t> replaced;
        if (!for_a.empty() || !for_b.empty()) {
            if (!order.seed) {
                if (!for_b.empty()) {
                    auto s = split_on(b, for_b.front(), g);
                    next.insert(next.end(), s.begin(), s.end());
                    replaced.push_back(j);
                }
                if (!for_a.empty()) {
                    auto s = split_on(a, for_a.front(), g);
                    next.insert(next.end(), s.begin(), s.end());
                    replaced.push_back(i);
                }
            } else if (!for_b.empty()) {
                auto s = split_on(b, for_b[pick(for_b.size())], g);
                next.assign(s.begin(), s.end());
                replaced.push_back(j);
            } else {
                auto s = split_on(a, for_a[pick(for_a.size())], g);
                next.assign(s.begin(), s.end());
                replaced.push_back(i);
            }
        } else {
            // Same variables, compatible, neither dominating: some shared
            // domain has overlapping, non-nested events.
            auto ds = refinable_domains(b, a);
            if (!ds.empty()) {
                next = refine(b, a, ds[pick(ds.size())]);
                replaced.push_back(j);
            } else {
                ds = refinable_domains(a, b);
                if (ds.empty())
                    throw ContractError("splitting made no progress");
                next = refine(a, b, ds[pick(ds.size())]);
                replaced.push_back(i);
            }
        }
        std::sort(replaced.rbegin(), replaced.rend());
        for (std::size_t r : replaced)
            K.erase(K.begin() + static_cast<long>(r));
        K.insert(K.end(), next.begin(), next.end());
        canonical(K);
    }
    return K;
}

CapacityInterval xi_c(std::span<const CompositeChoice> K_in, const GroundProgram& g) {
    std::vector<CompositeChoice> K(K_in.begin(), K_in.end());
    canonical(K);
    if (!pairwise_incompatible(K))
        throw ContractError("xi_c requires a pairwise incompatible set of choices");

    // Same-domain alternatives that do not exhaust the frame are combined by
    // the union of their events, as BP-upper does for worlds.
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::uint32_t d = 0; d < g.domains.size() && !merged; ++d) {
            std::map<CompositeChoice, std::vector<std::size_t>> groups;
            for (std::size_t i = 0; i < K.size(); ++i) {
                if (!K[i].mentions_domain(d))
                    continue;
                CompositeChoice rest = K[i];
                rest.erase_domain(d);
                groups[rest].push_back(i);
            }
            for (const auto& [rest, members] : groups) {
                if (members.size() < 2)
                    continue;
                EventMask u;
                for (std::size_t i : members)
                    u = u | K[i].beliefs().at(d);
                if (u == g.domains[d].frame().full())
                    continue;
                CompositeChoice combined = rest;
                combined.set_event(d, u);
                std::vector<CompositeChoice> next;
                for (std::size_t i = 0; i < K.size(); ++i)
                    if (std::find(members.begin(), members.end(), i) == members.end())
                        next.push_back(K[i]);
                next.push_back(std::move(combined));
                K = std::move(next);
                canonical(K);
                merged = true;
                break;
            }
        }
    }

    CapacityInterval acc = CapacityInterval::zero();
    for (const auto& k : K)
        acc += rho_comp(k, g);
    return acc;
}

} // namespace calp
