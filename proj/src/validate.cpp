#include "validate_impl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace calp {

namespace {

bool reserved(const std::string& pred) {
    return pred == "belief" || pred == "domain" || pred == "mass";
}

std::optional<SourceLoc> at(const std::vector<SourceLoc>* v, std::size_t i) {
    if (v && i < v->size())
        return (*v)[i];
    return std::nullopt;
}

void collect_vars(const Atom& a, std::set<std::string>& out) {
    for (const auto& t : a.args)
        if (t.variable)
            out.insert(t.name);
}

// Union-find based unification over terms with renamed-apart variables.
class Unifier {
public:
    bool unify(const Atom& a, const Atom& b) {
        if (a.predicate != b.predicate || a.args.size() != b.args.size())
            return false;
        for (std::size_t i = 0; i < a.args.size(); ++i)
            if (!bind(key(a.args[i], 'a'), key(b.args[i], 'b')))
                return false;
        return true;
    }

private:
    static std::string key(const Term& t, char side) {
        return t.variable ? std::string{side, ':'} + t.name : "#" + t.name;
    }
    static bool is_const(const std::string& k) { return k[0] == '#'; }

    std::string find(const std::string& k) {
        auto it = parent_.find(k);
        if (it == parent_.end() || it->second == k)
            return k;
        return it->second = find(it->second);
    }

    bool bind(const std::string& x, const std::string& y) {
        std::string rx = find(x), ry = find(y);
        if (rx == ry)
            return true;
        if (is_const(rx) && is_const(ry))
            return false;
        if (is_const(rx))
            std::swap(rx, ry);
        parent_[rx] = ry;
        return true;
    }

    std::map<std::string, std::string> parent_;
};

} // namespace

bool unifiable(const Atom& a, const Atom& b) {
    return Unifier{}.unify(a, b);
}

namespace detail {

void classify_literals(CaLProgram& p) {
    std::set<std::string> prob_sigs, head_sigs;
    for (const auto& f : p.prob_facts)
        prob_sigs.insert(f.atom.signature());
    for (const auto& r : p.rules)
        head_sigs.insert(r.head.signature());
    for (auto& r : p.rules)
        for (auto& l : r.body) {
            if (l.kind == LiteralKind::belief)
                continue;
            const auto sig = l.atom.signature();
            l.kind = prob_sigs.count(sig) && !head_sigs.count(sig) ? LiteralKind::probabilistic
                                                                   : LiteralKind::ordinary;
        }
}

std::vector<Diagnostic> validate(const CaLProgram& p, const ProgramLocs* locs) {
    std::vector<Diagnostic> out;
    auto report = [&](std::string_view code, std::string msg, std::optional<SourceLoc> loc) {
        out.push_back({std::string(code), std::move(msg), loc});
    };

    std::set<std::string> seen_domains;
    for (std::size_t d = 0; d < p.domains.size(); ++d) {
        const DomainDecl& dom = p.domains[d];
        auto loc = at(locs ? &locs->domains : nullptr, d);
        if (!seen_domains.insert(dom.id).second)
            report(diag::duplicate_domain, "domain " + dom.id + " declared more than once", loc);
        if (dom.elements.empty())
            report(diag::empty_frame, "domain " + dom.id + " has an empty frame", loc);
        if (dom.elements.size() > max_frame_size)
            report(diag::frame_too_large,
                   "domain " + dom.id + " has " + std::to_string(dom.elements.size()) +
                       " elements; at most " + std::to_string(max_frame_size) + " are supported",
                   loc);
        std::set<std::string> elems;
        for (const auto& e : dom.elements)
            if (!elems.insert(e).second)
                report(diag::duplicate_element, "element " + e + " repeated in domain " + dom.id, loc);

        const EventMask full = EventMask::full(static_cast<unsigned>(std::min<std::size_t>(dom.elements.size(), 31)));
        const std::vector<SourceLoc>* mass_locs = locs && d < locs->masses.size() ? &locs->masses[d] : nullptr;
        std::set<std::uint32_t> focal;
        double total = 0.0;
        for (std::size_t m = 0; m < dom.masses.size(); ++m) {
            const FocalSet& f = dom.masses[m];
            auto mloc = at(mass_locs, m);
            if (f.event.empty())
                report(diag::empty_focal_set, "mass assigned to the empty set in domain " + dom.id, mloc);
            if (!f.event.subset_of(full))
                report(diag::unknown_element, "focal set outside the frame of domain " + dom.id, mloc);
            if (!focal.insert(f.event.bits()).second)
                report(diag::duplicate_mass, "focal set assigned twice in domain " + dom.id, mloc);
            if (!(f.mass > 0.0) || f.mass > 1.0 + BeliefDomain::mass_tolerance)
                report(diag::mass_range,
                       "mass " + format_number(f.mass) + " in domain " + dom.id + " is not in (0,1]", mloc);
            total += f.mass;
        }
        const bool dropped = locs && d < locs->dropped_masses.size() && locs->dropped_masses[d];
        if (!dropped && std::fabs(total - 1.0) > BeliefDomain::mass_tolerance)
            report(diag::mass_sum, "masses of domain " + dom.id + " sum to " + format_number(total) + ", not 1",
                   loc);
    }

    for (std::size_t i = 0; i < p.prob_facts.size(); ++i) {
        const auto& f = p.prob_facts[i];
        auto loc = at(locs ? &locs->prob_facts : nullptr, i);
        if (!(f.prob >= 0.0 && f.prob <= 1.0))
            report(diag::prob_range, "probability " + format_number(f.prob) + " of " + f.atom.str() +
                                         " is not in [0,1]", loc);
        if (reserved(f.atom.predicate))
            report(diag::reserved_predicate, f.atom.predicate + " cannot be a probabilistic fact", loc);
        for (std::size_t j = 0; j < i; ++j)
            if (unifiable(f.atom, p.prob_facts[j].atom))
                report(diag::probfact_overlap,
                       "probabilistic facts " + p.prob_facts[j].atom.str() + " and " + f.atom.str() + " overlap",
                       loc);
    }

    for (std::size_t i = 0; i < p.rules.size(); ++i) {
        const Rule& r = p.rules[i];
        auto loc = at(locs ? &locs->rules : nullptr, i);
        if (reserved(r.head.predicate))
            report(diag::reserved_predicate, r.head.predicate + " cannot be the head of a rule", loc);
        for (const auto& f : p.prob_facts)
            if (unifiable(r.head, f.atom))
                report(diag::probfact_head_overlap,
                       "rule head " + r.head.str() + " unifies with probabilistic fact " + f.atom.str(), loc);

        std::set<std::string> bound, needed;
        collect_vars(r.head, needed);
        for (const auto& l : r.body) {
            if (l.kind == LiteralKind::belief) {
                if (!l.positive)
                    report(diag::negative_belief, "negated belief literal must be rewritten to its complement", loc);
                const DomainDecl* dom = p.find_domain(l.belief.domain);
                if (!dom)
                    report(diag::unknown_domain, "belief literal uses undeclared domain " + l.belief.domain, loc);
                else if (!l.belief.event.subset_of(EventMask::full(static_cast<unsigned>(
                             std::min<std::size_t>(dom->elements.size(), 31)))))
                    report(diag::unknown_element, "belief event outside the frame of domain " + dom->id, loc);
                continue;
            }
            if (reserved(l.atom.predicate))
                report(diag::reserved_predicate, l.atom.predicate + " is reserved", loc);
            collect_vars(l.atom, l.positive ? bound : needed);
        }
        std::vector<std::string> unsafe;
        std::set_difference(needed.begin(), needed.end(), bound.begin(), bound.end(), std::back_inserter(unsafe));
        if (!unsafe.empty()) {
            std::string vars;
            for (const auto& v : unsafe)
                vars += (vars.empty() ? "" : ", ") + v;
            report(diag::unsafe_rule, "rule for " + r.head.str() + " is unsafe: " + vars +
                                          " not bound by a positive body literal", loc);
        }
    }
    return out;
}

} // namespace detail

std::vector<Diagnostic> validate(const CaLProgram& p) {
    return detail::validate(p, nullptr);
}

} // namespace calp
