#include "calp/engine.hpp"

#include "calp/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace calp {

namespace {

// Satisfying-world table plus enumeration of the worlds a choice admits.
class ExplanationOracle {
public:
    ExplanationOracle(const GroundProgram& g, AtomId q, std::uint64_t cap)
        : g_(g), index_(g, cap), sat_(satisfying_worlds(g, q, cap)) {}

    const WorldIndex& index() const { return index_; }
    bool satisfies(std::uint64_t i) const { return sat_[i] != 0; }
    std::uint64_t size() const { return sat_.size(); }

    // Calls fn(index) for each admitted world; stops when fn returns false.
    template <class Fn> bool all_admitted(const CompositeChoice& k, Fn&& fn) const {
        std::uint64_t fixed = 0, fixed_bits = 0;
        for (const auto& [f, sel] : k.bayesian()) {
            fixed |= std::uint64_t{1} << f;
            if (sel)
                fixed_bits |= std::uint64_t{1} << f;
        }
        const std::uint64_t free_facts = (index_.fact_combinations() - 1) & ~fixed;

        const std::size_t nd = g_.domains.size();
        std::vector<std::vector<std::uint64_t>> offsets(nd);
        std::uint64_t stride = 1;
        std::vector<std::uint64_t> strides(nd);
        for (std::size_t d = nd; d-- > 0;) {
            strides[d] = stride;
            stride *= index_.events_of(d).size();
        }
        for (std::size_t d = 0; d < nd; ++d) {
            auto it = k.beliefs().find(static_cast<std::uint32_t>(d));
            const auto& ev = index_.events_of(d);
            for (std::size_t p = 0; p < ev.size(); ++p)
                if (it == k.beliefs().end() || ev[p].subset_of(it->second))
                    offsets[d].push_back(p * strides[d]);
            if (offsets[d].empty())
                return true;
        }

        std::vector<std::size_t> pos(nd, 0);
        std::uint64_t sub = 0;
        for (;;) {
            const std::uint64_t mask = fixed_bits | sub;
            std::fill(pos.begin(), pos.end(), 0);
            for (;;) {
                std::uint64_t i = mask * index_.events_per_fact_mask();
                for (std::size_t d = 0; d < nd; ++d)
                    i += offsets[d][pos[d]];
                if (!fn(i))
                    return false;
                std::size_t d = nd;
                while (d-- > 0) {
                    if (++pos[d] < offsets[d].size())
                        break;
                    pos[d] = 0;
                }
                if (d == static_cast<std::size_t>(-1))
                    break;
            }
            if (sub == free_facts)
                break;
            sub = (sub - free_facts) & free_facts;
        }
        return true;
    }

    bool explains(const CompositeChoice& k) const {
        return all_admitted(k, [&](std::uint64_t i) { return satisfies(i); });
    }

private:
    const GroundProgram& g_;
    WorldIndex index_;
    std::vector<std::uint8_t> sat_;
};

CompositeChoice total_choice(const GroundProgram& g, const BeliefWorld& w) {
    CompositeChoice k;
    for (std::uint32_t f = 0; f < g.prob_facts.size(); ++f)
        k.add(BayesianChoice{f, w.chooses(f)});
    for (std::uint32_t d = 0; d < g.domains.size(); ++d)
        k.add(BeliefChoice{d, w.events[d]});
    return k;
}

// Strict supersets of e within the frame, largest first, then by mask.
std::vector<EventMask> widenings(EventMask e, EventMask full) {
    std::vector<EventMask> out;
    const std::uint32_t free = (full - e).bits();
    for (std::uint32_t s = free; s != 0; s = (s - 1) & free)
        out.push_back(e | EventMask(s));
    std::sort(out.begin(), out.end(), [](EventMask a, EventMask b) {
        if (a.count() != b.count())
            return a.count() > b.count();
        return a < b;
    });
    return out;
}

CompositeChoice generalize(const GroundProgram& g, const ExplanationOracle& oracle, CompositeChoice k) {
    for (std::uint32_t f = 0; f < g.prob_facts.size(); ++f) {
        CompositeChoice t = k;
        t.erase_fact(f);
        if (oracle.explains(t))
            k = std::move(t);
    }
    for (std::uint32_t d = 0; d < g.domains.size(); ++d) {
        const EventMask full = g.domains[d].frame().full();
        for (EventMask wider : widenings(k.beliefs().at(d), full)) {
            CompositeChoice t = k;
            if (wider == full)
                t.erase_domain(d);
            else
                t.set_event(d, wider);
            if (oracle.explains(t)) {
                k = std::move(t);
                break;
            }
        }
    }
    return k;
}

std::string interval_text(const CapacityInterval& c) {
    std::ostringstream os;
    os.precision(17);
    os << '[' << c.lo() << ", " << c.hi() << ']';
    return os.str();
}

} // namespace

std::vector<CompositeChoice> find_covering_explanations(const GroundProgram& g, std::string_view q,
                                                        const EngineOptions& opts,
                                                        std::vector<std::string>* diagnostics) {
    const auto atom = g.find_atom(q);
    if (!atom) {
        WorldIndex check(g, opts.world_cap);
        return {};
    }
    const ExplanationOracle oracle(g, *atom, opts.world_cap);
    std::vector<std::uint8_t> covered(oracle.size(), 0);
    std::vector<CompositeChoice> K;
    for (std::uint64_t i = 0; i < oracle.size(); ++i) {
        if (!oracle.satisfies(i) || covered[i])
            continue;
        const BeliefWorld w = oracle.index().world(i);
        CompositeChoice k = total_choice(g, w);
        if (!oracle.explains(k)) {
            covered[i] = 1;
            if (diagnostics)
                diagnostics->push_back("world " + std::to_string(i) + " " + k.str(g) + " entails " + std::string(q) +
                                       " but some world with stronger evidence does not; it is not covered");
            continue;
        }
        k = generalize(g, oracle, std::move(k));
        oracle.all_admitted(k, [&](std::uint64_t j) {
            covered[j] = 1;
            return true;
        });
        K.push_back(std::move(k));
    }

    std::sort(K.begin(), K.end());
    K.erase(std::unique(K.begin(), K.end()), K.end());
    std::vector<CompositeChoice> out;
    for (std::size_t i = 0; i < K.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < K.size() && !dominated; ++j)
            dominated = j != i && K[j].dominates(K[i]);
        if (!dominated)
            out.push_back(K[i]);
    }
    return out;
}

bool is_explanation(const GroundProgram& g, const CompositeChoice& kappa, std::string_view q, std::uint64_t cap) {
    const auto atom = g.find_atom(q);
    if (!atom)
        return false;
    return ExplanationOracle(g, *atom, cap).explains(kappa);
}

CapacityInterval query_by_explanations(const GroundProgram& g, std::string_view q, const EngineOptions& opts) {
    const auto K = make_pairwise_incompatible(find_covering_explanations(g, q, opts), g);
    return xi_c(K, g);
}

std::string_view to_string(Method m) {
    switch (m) {
    case Method::worlds:
        return "worlds";
    case Method::explanations:
        return "explanations";
    case Method::both:
        break;
    }
    return "both";
}

std::optional<Method> parse_method(std::string_view s) {
    for (Method m : {Method::both, Method::worlds, Method::explanations})
        if (to_string(m) == s)
            return m;
    return std::nullopt;
}

QueryResult answer_query(const GroundProgram& g, std::string_view q, const EngineOptions& opts, Method method) {
    if (!g.stratification().stratified)
        throw StratificationError("program is not stratified");
    QueryResult r;
    r.query = std::string(q);
    r.method = method;

    std::vector<CompositeChoice> K;
    if (method != Method::worlds) {
        K = find_covering_explanations(g, q, opts, &r.diagnostics);
        r.by_explanations = xi_c(make_pairwise_incompatible(K, g), g);
    }
    if (method != Method::explanations)
        r.by_worlds = query_by_worlds(g, q, opts.world_cap);

    if (r.by_explanations && r.by_worlds) {
        r.agree = r.by_explanations->near(*r.by_worlds, agreement_tolerance);
        if (!r.agree) {
            std::vector<std::string> straddling;
            for (std::uint32_t d = 0; d < g.domains.size(); ++d) {
                const bool hit = std::any_of(K.begin(), K.end(), [&](const CompositeChoice& k) {
                    auto it = k.beliefs().find(d);
                    return it != k.beliefs().end() && g.domains[d].straddles(it->second);
                });
                if (hit)
                    straddling.push_back(g.domains[d].id());
            }
            std::string msg = "pipelines disagree: explanations " + interval_text(*r.by_explanations) + ", worlds " +
                              interval_text(*r.by_worlds);
            if (!straddling.empty()) {
                msg += "; straddling focal sets in domain";
                msg += straddling.size() > 1 ? "s " : " ";
                for (std::size_t i = 0; i < straddling.size(); ++i)
                    msg += (i ? ", " : "") + straddling[i];
            }
            r.diagnostics.push_back(msg);
        }
    }

    const CapacityInterval raw = r.by_explanations ? *r.by_explanations : *r.by_worlds;
    r.reported = raw.clamped_unit(&r.clamped);
    if (r.clamped)
        r.diagnostics.push_back("reported interval clamped to [0,1]; raw value " + interval_text(raw));
    return r;
}

} // namespace calp
