#include "calp/grounding.hpp"

#include "calp/error.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace calp {

// ---------------------------------------------------------------------------
// GroundProgram

std::optional<AtomId> GroundProgram::find_atom(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> GroundProgram::fact_index(AtomId a) const {
    for (std::uint32_t i = 0; i < prob_facts.size(); ++i)
        if (prob_facts[i].atom == a)
            return i;
    return std::nullopt;
}

std::optional<std::uint32_t> GroundProgram::domain_index(std::string_view id) const {
    for (std::uint32_t i = 0; i < domains.size(); ++i)
        if (domains[i].id() == id)
            return i;
    return std::nullopt;
}

std::vector<BeliefFact> GroundProgram::belief_vocabulary() const {
    std::vector<BeliefFact> out;
    for (const auto& d : domains)
        for (std::uint32_t bits = 0; bits <= d.frame().full().bits(); ++bits)
            out.push_back({d.id(), EventMask(bits)});
    return out;
}

bool GroundProgram::defines(std::string_view signature) const {
    for (const auto& f : prob_facts)
        if (signatures_[f.atom] == signature)
            return true;
    for (const auto& r : rules)
        if (signatures_[r.head] == signature)
            return true;
    return false;
}

std::string GroundProgram::rule_text(const GroundRule& r) const {
    std::string s = names_[r.head];
    const char* sep = " :- ";
    for (AtomId a : r.positive) {
        s += sep + names_[a];
        sep = ", ";
    }
    for (AtomId a : r.negative) {
        s += sep + std::string("\\+") + names_[a];
        sep = ", ";
    }
    for (const auto& b : r.beliefs) {
        const auto& dom = domains[b.domain];
        s += sep + std::string("belief(") + dom.id() + ",[";
        auto names = dom.frame().names(b.event);
        for (std::size_t i = 0; i < names.size(); ++i)
            s += (i ? "," : "") + names[i];
        s += "])";
        sep = ", ";
    }
    return s + ".";
}

AtomId GroundProgram::intern(const std::string& name, const std::string& signature) {
    auto [it, fresh] = index_.try_emplace(name, static_cast<AtomId>(names_.size()));
    if (fresh) {
        names_.push_back(name);
        signatures_.push_back(signature);
    }
    return it->second;
}

void GroundProgram::finalize() {
    strat_ = check_stratified(*this);
    rule_strata_.assign(rules.size(), 0);
    if (strat_.stratified)
        for (std::size_t r = 0; r < rules.size(); ++r)
            rule_strata_[r] = strat_.strata.at(signatures_[rules[r].head]);
    occurrences_.assign(names_.size(), {});
    for (std::uint32_t r = 0; r < rules.size(); ++r)
        for (AtomId a : rules[r].positive)
            occurrences_[a].push_back(r);
}

// ---------------------------------------------------------------------------
// Grounding

namespace {

using Binding = std::map<std::string, std::string>;
using Tuple = std::vector<std::string>;

void collect_constants(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args)
        if (!t.variable)
            out.insert(t.name);
}

Atom substitute(const Atom& a, const Binding& b) {
    Atom out = a;
    for (auto& t : out.args)
        if (t.variable) {
            auto it = b.find(t.name);
            if (it == b.end())
                throw ContractError("variable " + t.name + " unbound while grounding " + a.str());
            t = {false, it->second};
        }
    return out;
}

bool match(const Atom& pattern, const Tuple& tuple, Binding& b, std::vector<std::string>& bound_here) {
    for (std::size_t i = 0; i < pattern.args.size(); ++i) {
        const Term& t = pattern.args[i];
        if (!t.variable) {
            if (t.name != tuple[i])
                return false;
            continue;
        }
        auto it = b.find(t.name);
        if (it == b.end()) {
            b.emplace(t.name, tuple[i]);
            bound_here.push_back(t.name);
        } else if (it->second != tuple[i]) {
            return false;
        }
    }
    return true;
}

class Grounder {
public:
    Grounder(const CaLProgram& p, const GroundingOptions& opts) : p_(p), opts_(opts) {}

    GroundProgram run() {
        GroundProgram g;
        DomainMap doms = p_.belief_domains();
        for (auto& [id, d] : doms)
            g.domains.push_back(d);

        std::set<std::string> universe;
        for (const auto& f : p_.prob_facts)
            collect_constants(f.atom, universe);
        for (const auto& r : p_.rules) {
            collect_constants(r.head, universe);
            for (const auto& l : r.body)
                if (l.kind != LiteralKind::belief)
                    collect_constants(l.atom, universe);
        }
        const std::vector<std::string> constants(universe.begin(), universe.end());

        bool nonground = false;
        // Ground probabilistic facts: every instantiation over the universe.
        std::map<std::string, std::pair<Atom, double>> facts;
        for (const auto& f : p_.prob_facts) {
            std::vector<std::string> vars;
            for (const auto& t : f.atom.args)
                if (t.variable && std::find(vars.begin(), vars.end(), t.name) == vars.end())
                    vars.push_back(t.name);
            nonground |= !vars.empty();
            Binding b;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == vars.size()) {
                    Atom a = substitute(f.atom, b);
                    facts.emplace(a.str(), std::make_pair(a, f.prob));
                    return;
                }
                for (const auto& c : constants) {
                    b[vars[i]] = c;
                    rec(i + 1);
                }
                b.erase(vars[i]);
            };
            rec(0);
        }
        for (auto& [name, fp] : facts)
            add_possible(fp.first);

        for (const auto& r : p_.rules)
            nonground |= !r.head.ground();
        if (nonground && constants.empty())
            g.warnings.push_back("program has non-ground clauses but no constants; they ground to nothing");

        // Fixpoint over possibly-derivable atoms.
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& r : p_.rules)
                grew |= instantiate(r);
        }

        for (auto& [name, fp] : facts)
            g.prob_facts.push_back({g.intern(name, fp.first.signature()), fp.second});
        for (const auto& [key, gr] : rules_) {
            (void)key;
            GroundRule out;
            out.head = g.intern(gr.head.str(), gr.head.signature());
            for (const auto& l : gr.body) {
                if (l.kind == LiteralKind::belief) {
                    auto d = g.domain_index(l.belief.domain);
                    if (!d)
                        throw DomainError("belief literal uses undeclared domain " + l.belief.domain);
                    out.beliefs.push_back({*d, l.belief.event});
                } else if (l.positive) {
                    out.positive.push_back(g.intern(l.atom.str(), l.atom.signature()));
                } else {
                    out.negative.push_back(g.intern(l.atom.str(), l.atom.signature()));
                }
            }
            g.rules.push_back(std::move(out));
        }
        g.finalize();
        return g;
    }

private:
    bool add_possible(const Atom& a) {
        if (!possible_.insert(a.str()).second)
            return false;
        Tuple t;
        for (const auto& x : a.args)
            t.push_back(x.name);
        by_sig_[a.signature()].push_back(std::move(t));
        return true;
    }

    bool instantiate(const Rule& r) {
        std::vector<const Atom*> pos;
        for (const auto& l : r.body)
            if (l.kind != LiteralKind::belief && l.positive)
                pos.push_back(&l.atom);
        bool grew = false;
        Binding b;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == pos.size()) {
                Rule gr;
                gr.head = substitute(r.head, b);
                for (const auto& l : r.body) {
                    BodyLiteral gl = l;
                    if (l.kind != LiteralKind::belief)
                        gl.atom = substitute(l.atom, b);
                    gr.body.push_back(std::move(gl));
                }
                std::sort(gr.body.begin(), gr.body.end());
                gr.body.erase(std::unique(gr.body.begin(), gr.body.end()), gr.body.end());
                std::string key = gr.head.str();
                for (const auto& l : gr.body)
                    key += "|" + std::to_string(static_cast<int>(l.kind)) + (l.positive ? "+" : "-") +
                           (l.kind == LiteralKind::belief ? l.belief.domain + ":" + std::to_string(l.belief.event.bits())
                                                          : l.atom.str());
                if (rules_.emplace(key, gr).second) {
                    if (rules_.size() > opts_.max_ground_rules)
                        throw ResourceError("grounding exceeds " + std::to_string(opts_.max_ground_rules) +
                                            " ground rules");
                    grew = true;
                }
                grew |= add_possible(gr.head);
                return;
            }
            // Copy: add_possible may append to this very vector.
            const auto tuples = by_sig_[pos[i]->signature()];
            for (const auto& t : tuples) {
                std::vector<std::string> bound_here;
                if (match(*pos[i], t, b, bound_here))
                    rec(i + 1);
                for (const auto& v : bound_here)
                    b.erase(v);
            }
        };
        rec(0);
        return grew;
    }

    const CaLProgram& p_;
    const GroundingOptions& opts_;
    std::set<std::string> possible_;
    std::map<std::string, std::vector<Tuple>> by_sig_;
    std::map<std::string, Rule> rules_;
};

} // namespace

GroundProgram ground(const CaLProgram& p, const GroundingOptions& opts) {
    return Grounder(p, opts).run();
}

// ---------------------------------------------------------------------------
// Stratification

StratificationReport check_stratified(const GroundProgram& g) {
    std::map<std::string, int> id;
    std::vector<std::string> preds;
    auto node = [&](const std::string& sig) {
        auto [it, fresh] = id.try_emplace(sig, static_cast<int>(preds.size()));
        if (fresh)
            preds.push_back(sig);
        return it->second;
    };
    for (AtomId a = 0; a < g.atom_count(); ++a)
        node(g.atom_signature(a));

    struct Edge {
        int to;
        bool negative;
    };
    std::vector<std::vector<Edge>> adj(preds.size());
    for (const auto& r : g.rules) {
        const int h = node(g.atom_signature(r.head));
        for (AtomId a : r.positive)
            adj[h].push_back({node(g.atom_signature(a)), false});
        for (AtomId a : r.negative)
            adj[h].push_back({node(g.atom_signature(a)), true});
    }

    // Tarjan; components come out in reverse topological order (sinks first).
    const int n = static_cast<int>(preds.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::vector<int>> comps;
    int counter = 0;
    std::function<void(int)> strong = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (const auto& e : adj[v]) {
            if (index[e.to] < 0) {
                strong(e.to);
                low[v] = std::min(low[v], low[e.to]);
            } else if (on_stack[e.to]) {
                low[v] = std::min(low[v], index[e.to]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<int> c;
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                comp[w] = static_cast<int>(comps.size());
                c.push_back(w);
            } while (w != v);
            comps.push_back(std::move(c));
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0)
            strong(v);

    StratificationReport rep;
    std::vector<int> stratum(comps.size(), 0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        int s = 0;
        for (int v : comps[c])
            for (const auto& e : adj[v]) {
                if (comp[e.to] == static_cast<int>(c)) {
                    if (e.negative && rep.stratified) {
                        rep.stratified = false;
                        for (int w : comps[c])
                            rep.offending_cycle.push_back(preds[w]);
                        std::sort(rep.offending_cycle.begin(), rep.offending_cycle.end());
                    }
                    continue;
                }
                s = std::max(s, stratum[comp[e.to]] + (e.negative ? 1 : 0));
            }
        stratum[c] = s;
    }
    if (rep.stratified)
        for (int v = 0; v < n; ++v)
            rep.strata[preds[v]] = stratum[comp[v]];
    return rep;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {
constexpr std::uint32_t disabled = ~0u;
}

ModelEvaluator::ModelEvaluator(const GroundProgram& g) : g_(g) {
    const auto& rep = g.stratification();
    if (!rep.stratified) {
        std::string cyc;
        for (const auto& p : rep.offending_cycle)
            cyc += (cyc.empty() ? "" : ", ") + p;
        throw StratificationError("program is not stratified: negative cycle through " + cyc);
    }
    int top = 0;
    for (int s : g.rule_strata())
        top = std::max(top, s);
    by_stratum_.assign(static_cast<std::size_t>(top) + 1, {});
    for (std::uint32_t r = 0; r < g.rules.size(); ++r)
        by_stratum_[g.rule_strata()[r]].push_back(r);
    truth_.assign(g.atom_count(), 0);
    pending_.assign(g.rules.size(), disabled);
}

const std::vector<std::uint8_t>& ModelEvaluator::evaluate(const WorldView& w) {
    std::fill(truth_.begin(), truth_.end(), 0);
    for (std::size_t i = 0; i < g_.prob_facts.size(); ++i)
        if ((w.facts >> i) & 1u)
            truth_[g_.prob_facts[i].atom] = 1;

    const auto& occ = g_.positive_occurrences();
    const auto& rule_stratum = g_.rule_strata();
    for (std::size_t s = 0; s < by_stratum_.size(); ++s) {
        queue_.clear();
        for (std::uint32_t r : by_stratum_[s]) {
            const GroundRule& rule = g_.rules[r];
            bool enabled = true;
            for (AtomId a : rule.negative)
                enabled = enabled && !truth_[a];
            for (const auto& b : rule.beliefs) {
                const EventMask have = b.domain < w.events.size() ? w.events[b.domain]
                                                                  : g_.domains[b.domain].frame().full();
                enabled = enabled && have.subset_of(b.event);
            }
            if (!enabled) {
                pending_[r] = disabled;
                continue;
            }
            std::uint32_t missing = 0;
            for (AtomId a : rule.positive)
                missing += truth_[a] ? 0 : 1;
            pending_[r] = missing;
        }
        for (std::uint32_t r : by_stratum_[s]) {
            const AtomId h = g_.rules[r].head;
            if (pending_[r] == 0 && !truth_[h]) {
                truth_[h] = 1;
                queue_.push_back(h);
            }
        }
        while (!queue_.empty()) {
            const AtomId a = queue_.back();
            queue_.pop_back();
            for (std::uint32_t r : occ[a]) {
                if (rule_stratum[r] != static_cast<int>(s) || pending_[r] == disabled || pending_[r] == 0)
                    continue;
                if (--pending_[r] == 0) {
                    const AtomId h = g_.rules[r].head;
                    if (!truth_[h]) {
                        truth_[h] = 1;
                        queue_.push_back(h);
                    }
                }
            }
        }
    }
    return truth_;
}

namespace {

std::pair<std::uint64_t, std::vector<EventMask>> world_of(const GroundProgram& g,
                                                          std::span<const std::string> chosen,
                                                          std::span<const BeliefFact> belief_set) {
    if (g.prob_facts.size() > 64)
        throw ResourceError("more than 64 ground probabilistic facts");
    std::uint64_t mask = 0;
    for (const auto& name : chosen) {
        auto a = g.find_atom(name);
        auto i = a ? g.fact_index(*a) : std::nullopt;
        if (!i)
            throw ContractError(name + " is not a ground probabilistic fact");
        mask |= std::uint64_t{1} << *i;
    }
    std::vector<EventMask> events;
    for (const auto& d : g.domains)
        events.push_back(d.frame().full());
    for (const auto& bf : canonicalize(belief_set)) {
        auto d = g.domain_index(bf.domain);
        if (!d)
            throw DomainError("unknown belief domain " + bf.domain);
        if (bf.event.empty())
            throw ContractError("belief set is inconsistent in domain " + bf.domain);
        events[*d] = bf.event;
    }
    return {mask, std::move(events)};
}

} // namespace

std::vector<std::string> well_founded_model(const GroundProgram& g, std::span<const std::string> chosen_facts,
                                            std::span<const BeliefFact> belief_set) {
    auto [mask, events] = world_of(g, chosen_facts, belief_set);
    ModelEvaluator ev(g);
    const auto& truth = ev.evaluate({mask, events});
    std::vector<std::string> out;
    for (AtomId a = 0; a < truth.size(); ++a)
        if (truth[a])
            out.push_back(g.atom_name(a));
    std::sort(out.begin(), out.end());
    return out;
}

bool entails(const GroundProgram& g, std::span<const std::string> chosen_facts,
             std::span<const BeliefFact> belief_set, std::string_view q) {
    auto a = g.find_atom(q);
    if (!a)
        return false;
    auto [mask, events] = world_of(g, chosen_facts, belief_set);
    ModelEvaluator ev(g);
    return ev.entails({mask, events}, *a);
}

} // namespace calp
