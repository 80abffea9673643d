#pragma once

// Helpers shared by the unit tests and the acceptance runner: program
// loading, random program generators with an independent brute-force
// evaluator, and random choice sets.

#include "calp/engine.hpp"
#include "calp/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace calp::testing {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string corpus_path(const std::string& name) { return std::string(CALP_CORPUS_DIR) + "/" + name; }

inline CaLProgram parse_ok(std::string_view text) {
    ParseResult r = parse_program(text);
    if (!r.ok()) {
        std::string msg = "unexpected diagnostics:";
        for (const auto& d : r.diagnostics)
            msg += "\n  " + d.str();
        throw std::runtime_error(msg);
    }
    return std::move(r.program);
}

inline GroundProgram load(std::string_view text) { return ground(parse_ok(text)); }

struct CorpusQuery {
    std::string file;
    std::string query;
    std::string belief, plausibility, agree; // "-" when not pinned
};

inline std::vector<CorpusQuery> corpus_queries() {
    std::istringstream in(read_file(corpus_path("queries.tsv")));
    std::vector<CorpusQuery> out;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        CorpusQuery q;
        std::getline(row, q.file, '\t');
        std::getline(row, q.query, '\t');
        std::getline(row, q.belief, '\t');
        std::getline(row, q.plausibility, '\t');
        std::getline(row, q.agree, '\t');
        out.push_back(q);
    }
    return out;
}

inline std::vector<std::string> corpus_files() {
    return {"urns.calp",         "r_indep.calp",        "r_dep.calp",          "uav.calp",
            "problog_noisyor.calp", "problog_alarm.calp", "problog_graph.calp", "problog_negation.calp"};
}

// ---------------------------------------------------------------------------
// Random propositional programs with their own evaluator.
//
// Facts are f0..f{n-1}; derived atoms d0..d{m-1}; a rule for d_i only uses
// facts, belief literals and derived atoms d_j with j < i, so the program is
// acyclic and every world has a unique model, computed here directly.

struct TDomain {
    unsigned size = 0;
    std::vector<std::pair<std::uint32_t, double>> focal; // event bits, mass
};

struct TRule {
    unsigned head = 0;
    std::vector<unsigned> pos_facts, neg_facts, pos_derived, neg_derived;
    std::vector<std::pair<unsigned, std::uint32_t>> beliefs; // domain, event bits
};

struct TProgram {
    std::vector<double> probs;
    std::vector<TDomain> domains;
    unsigned derived = 0;
    std::vector<TRule> rules;

    static std::string fact(unsigned i) { return "f" + std::to_string(i); }
    static std::string atom(unsigned i) { return "d" + std::to_string(i); }
    static std::string dom(unsigned i) { return "dom" + std::to_string(i); }
    static std::string elem(unsigned d, unsigned e) { return "e" + std::to_string(d) + "_" + std::to_string(e); }

    std::string event_text(unsigned d, std::uint32_t bits) const {
        std::string s = "[";
        bool first = true;
        for (unsigned e = 0; e < domains[d].size; ++e)
            if ((bits >> e) & 1u) {
                s += (first ? "" : ", ") + elem(d, e);
                first = false;
            }
        return s + "]";
    }

    std::string render() const {
        std::string s;
        for (unsigned d = 0; d < domains.size(); ++d) {
            s += "domain(" + dom(d) + ", " + event_text(d, (1u << domains[d].size) - 1) + ").\n";
            for (const auto& [bits, m] : domains[d].focal)
                s += "mass(" + dom(d) + ", " + event_text(d, bits) + ", " + format_number(m) + ").\n";
        }
        for (unsigned i = 0; i < probs.size(); ++i)
            s += format_number(probs[i]) + "::" + fact(i) + ".\n";
        for (const auto& r : rules) {
            std::vector<std::string> body;
            for (unsigned f : r.pos_facts)
                body.push_back(fact(f));
            for (unsigned f : r.neg_facts)
                body.push_back("\\+ " + fact(f));
            for (unsigned a : r.pos_derived)
                body.push_back(atom(a));
            for (unsigned a : r.neg_derived)
                body.push_back("\\+ " + atom(a));
            for (const auto& [d, bits] : r.beliefs)
                body.push_back("belief(" + dom(d) + ", " + event_text(d, bits) + ")");
            s += atom(r.head);
            if (!body.empty()) {
                s += " :- ";
                for (std::size_t i = 0; i < body.size(); ++i)
                    s += (i ? ", " : "") + body[i];
            }
            s += ".\n";
        }
        return s;
    }

    // Truth of each derived atom. `events[d]` is the world's event for domain d.
    std::vector<bool> model(std::uint64_t facts, const std::vector<std::uint32_t>& events) const {
        std::vector<bool> t(derived, false);
        for (unsigned i = 0; i < derived; ++i)
            for (const auto& r : rules) {
                if (r.head != i)
                    continue;
                bool ok = true;
                for (unsigned f : r.pos_facts)
                    ok = ok && ((facts >> f) & 1u);
                for (unsigned f : r.neg_facts)
                    ok = ok && !((facts >> f) & 1u);
                for (unsigned a : r.pos_derived)
                    ok = ok && t[a];
                for (unsigned a : r.neg_derived)
                    ok = ok && !t[a];
                for (const auto& [d, bits] : r.beliefs)
                    ok = ok && (events[d] & ~bits) == 0;
                if (ok) {
                    t[i] = true;
                    break;
                }
            }
        return t;
    }

    // Probability of d_q by summing world weights (belief-free programs).
    double problog_probability(unsigned q) const {
        double total = 0.0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << probs.size()); ++m) {
            if (!model(m, {})[q])
                continue;
            double w = 1.0;
            for (unsigned i = 0; i < probs.size(); ++i)
                w *= ((m >> i) & 1u) ? probs[i] : 1.0 - probs[i];
            total += w;
        }
        return total;
    }
};

struct GenOptions {
    unsigned max_facts = 4;
    unsigned max_domains = 2;
    unsigned max_frame = 3;
    unsigned max_derived = 5;
    unsigned max_rules = 8;
    unsigned max_body = 3;
    bool beliefs = true;
    /// Negation over derived atoms (only those that do not depend on beliefs
    /// when `beliefs` is set).
    bool negation = true;
};

inline double random_prob(std::mt19937_64& rng) {
    // Two significant digits keep rendered programs short and exact.
    return std::uniform_int_distribution<int>(1, 99)(rng) / 100.0;
}

/// Random mass function over a frame of `size` elements.
inline TDomain random_domain(std::mt19937_64& rng, unsigned size) {
    TDomain d;
    d.size = size;
    const std::uint32_t full = (1u << size) - 1;
    const unsigned want = std::uniform_int_distribution<unsigned>(1, std::min<unsigned>(4, full))(rng);
    std::vector<std::uint32_t> events;
    while (events.size() < want) {
        const std::uint32_t e = std::uniform_int_distribution<std::uint32_t>(1, full)(rng);
        if (std::find(events.begin(), events.end(), e) == events.end())
            events.push_back(e);
    }
    // Integer hundredths summing to exactly 100.
    std::vector<int> parts(events.size(), 1);
    for (int left = 100 - static_cast<int>(events.size()); left > 0; --left)
        ++parts[std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng)];
    for (std::size_t i = 0; i < events.size(); ++i)
        d.focal.emplace_back(events[i], parts[i] / 100.0);
    return d;
}

inline TProgram random_program(std::mt19937_64& rng, const GenOptions& o) {
    auto uni = [&](unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng); };
    TProgram p;
    const unsigned nf = uni(0, o.max_facts);
    for (unsigned i = 0; i < nf; ++i)
        p.probs.push_back(random_prob(rng));
    if (o.beliefs) {
        const unsigned nd = uni(0, o.max_domains);
        for (unsigned d = 0; d < nd; ++d)
            p.domains.push_back(random_domain(rng, uni(1, o.max_frame)));
    }
    p.derived = uni(1, o.max_derived);
    const unsigned nr = uni(1, o.max_rules);
    std::vector<bool> belief_dependent(p.derived, false);
    std::vector<TRule> rules;
    for (unsigned k = 0; k < nr; ++k) {
        TRule r;
        r.head = uni(0, p.derived - 1);
        const unsigned nb = uni(0, o.max_body);
        for (unsigned b = 0; b < nb; ++b) {
            const unsigned kind = uni(0, 5);
            if (kind <= 1 && nf > 0) {
                (uni(0, 2) == 0 ? r.neg_facts : r.pos_facts).push_back(uni(0, nf - 1));
            } else if (kind <= 3 && r.head > 0) {
                const unsigned a = uni(0, r.head - 1);
                const bool neg = o.negation && uni(0, 2) == 0 && !belief_dependent[a];
                (neg ? r.neg_derived : r.pos_derived).push_back(a);
            } else if (!p.domains.empty()) {
                const unsigned d = uni(0, static_cast<unsigned>(p.domains.size()) - 1);
                const std::uint32_t full = (1u << p.domains[d].size) - 1;
                r.beliefs.emplace_back(d, std::uniform_int_distribution<std::uint32_t>(1, full)(rng));
            }
        }
        auto dedupe = [](auto& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedupe(r.pos_facts);
        dedupe(r.neg_facts);
        dedupe(r.pos_derived);
        dedupe(r.neg_derived);
        dedupe(r.beliefs);
        rules.push_back(std::move(r));
        // Rules arrive in arbitrary head order, so dependence is recomputed.
        std::fill(belief_dependent.begin(), belief_dependent.end(), false);
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& x : rules) {
                bool d2 = !x.beliefs.empty();
                for (unsigned a : x.pos_derived)
                    d2 = d2 || belief_dependent[a];
                if (d2 && !belief_dependent[x.head])
                    belief_dependent[x.head] = changed = true;
            }
        }
        // A negative literal over an atom that became belief dependent is
        // turned positive.
        for (auto& x : rules) {
            std::vector<unsigned> keep;
            for (unsigned a : x.neg_derived)
                (belief_dependent[a] ? x.pos_derived : keep).push_back(a);
            x.neg_derived = keep;
            dedupe(x.pos_derived);
        }
    }
    p.rules = std::move(rules);
    return p;
}

// ---------------------------------------------------------------------------
// World helpers.

/// World events for the test evaluator, from a library world.
inline std::vector<std::uint32_t> event_bits(const BeliefWorld& w) {
    std::vector<std::uint32_t> out;
    for (auto e : w.events)
        out.push_back(e.bits());
    return out;
}

/// Library fact mask -> test fact mask. Ground facts are sorted by name, so
/// f10 would precede f2; tests keep at most 10 facts.
inline std::uint64_t test_fact_mask(const GroundProgram& g, std::uint64_t lib_mask) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < g.prob_facts.size(); ++i)
        if ((lib_mask >> i) & 1u) {
            const std::string& n = g.atom_name(g.prob_facts[i].atom);
            m |= std::uint64_t{1} << std::stoul(n.substr(1));
        }
    return m;
}

/// Library domain order -> test domain order (ids dom0..dom9 sort numerically).
inline std::vector<std::uint32_t> test_events(const GroundProgram& g, const BeliefWorld& w) {
    std::vector<std::uint32_t> out(g.domains.size());
    for (std::size_t d = 0; d < g.domains.size(); ++d)
        out[std::stoul(g.domains[d].id().substr(3))] = w.events[d].bits();
    return out;
}


// ---------------------------------------------------------------------------
// Non-straddling instances for splitting: each domain has a cut event B such
// that every focal set lies inside B or inside its complement, and choices
// only use B or its complement.

struct SplitInstance {
    TProgram program;
    std::vector<std::uint32_t> cuts; // per domain, in test domain order
};

inline SplitInstance random_split_instance(std::mt19937_64& rng) {
    auto uni = [&](unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng); };
    SplitInstance s;
    const unsigned nf = uni(0, 4);
    for (unsigned i = 0; i < nf; ++i)
        s.program.probs.push_back(random_prob(rng));
    const unsigned nd = uni(nf == 0 ? 1 : 0, 2);
    for (unsigned d = 0; d < nd; ++d) {
        TDomain dom;
        dom.size = uni(2, 4);
        const std::uint32_t full = (1u << dom.size) - 1;
        const std::uint32_t cut = std::uniform_int_distribution<std::uint32_t>(1, full - 1)(rng);
        std::vector<std::uint32_t> events;
        for (std::uint32_t side : {cut, full & ~cut})
            for (std::uint32_t e = side;; e = (e - 1) & side) {
                if (e == 0)
                    break;
                if (uni(0, 2) == 0 || e == side)
                    events.push_back(e);
            }
        std::shuffle(events.begin(), events.end(), rng);
        events.resize(std::min<std::size_t>(events.size(), 4));
        std::vector<int> parts(events.size(), 1);
        for (int left = 100 - static_cast<int>(events.size()); left > 0; --left)
            ++parts[std::uniform_int_distribution<std::size_t>(0, parts.size() - 1)(rng)];
        for (std::size_t i = 0; i < events.size(); ++i)
            dom.focal.emplace_back(events[i], parts[i] / 100.0);
        s.program.domains.push_back(dom);
        s.cuts.push_back(cut);
    }
    s.program.derived = 1;
    return s;
}

/// Random set of composite choices over the instance (library indices).
inline std::vector<CompositeChoice> random_choices(std::mt19937_64& rng, const GroundProgram& g,
                                                   const SplitInstance& s) {
    auto uni = [&](unsigned lo, unsigned hi) { return std::uniform_int_distribution<unsigned>(lo, hi)(rng); };
    std::vector<CompositeChoice> K;
    const unsigned n = uni(2, 6);
    while (K.size() < n) {
        CompositeChoice k;
        for (std::uint32_t f = 0; f < g.prob_facts.size(); ++f)
            if (uni(0, 1) == 0)
                k.add(BayesianChoice{f, uni(0, 1) == 1});
        for (std::uint32_t d = 0; d < g.domains.size(); ++d)
            if (uni(0, 3) != 0) {
                const std::uint32_t cut = s.cuts[std::stoul(g.domains[d].id().substr(3))];
                const std::uint32_t full = g.domains[d].frame().full().bits();
                k.add(BeliefChoice{d, EventMask(uni(0, 1) ? cut : full & ~cut)});
            }
        K.push_back(k);
    }
    return K;
}

} // namespace calp::testing
