#include "calp/syntax.hpp"

#include "calp/error.hpp"
#include "validate_impl.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace calp {

bool Atom::ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.variable; });
}

std::string Atom::signature() const {
    return predicate + "/" + std::to_string(args.size());
}

std::string Atom::str() const {
    std::string s = predicate;
    if (!args.empty()) {
        s += '(';
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (i)
                s += ',';
            s += args[i].name;
        }
        s += ')';
    }
    return s;
}

std::string Diagnostic::str() const {
    std::string s;
    if (loc)
        s = std::to_string(loc->line) + ":" + std::to_string(loc->column) + ": ";
    return s + code + ": " + message;
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

const DomainDecl* CaLProgram::find_domain(std::string_view id) const {
    auto it = std::find_if(domains.begin(), domains.end(), [&](const DomainDecl& d) { return d.id == id; });
    return it == domains.end() ? nullptr : &*it;
}

DomainMap CaLProgram::belief_domains() const {
    DomainMap out;
    for (const auto& d : domains) {
        BeliefDomain dom(FrameOfDiscernment(d.id, d.elements), d.masses);
        if (!out.emplace(d.id, std::move(dom)).second)
            throw DomainError("domain " + d.id + " declared more than once");
    }
    return out;
}

std::vector<BeliefFact> CaLProgram::belief_vocabulary() const {
    std::vector<BeliefFact> out;
    for (const auto& d : domains) {
        const auto n = static_cast<unsigned>(std::min<std::size_t>(d.elements.size(), max_frame_size));
        for (std::uint32_t bits = 0; bits <= EventMask::full(n).bits(); ++bits)
            out.push_back({d.id, EventMask(bits)});
    }
    return out;
}

void CaLProgram::normalize() {
    detail::classify_literals(*this);
    for (auto& r : rules) {
        std::sort(r.body.begin(), r.body.end());
        r.body.erase(std::unique(r.body.begin(), r.body.end()), r.body.end());
    }
    std::sort(rules.begin(), rules.end());
    rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
    std::sort(prob_facts.begin(), prob_facts.end());
    prob_facts.erase(std::unique(prob_facts.begin(), prob_facts.end()), prob_facts.end());
    for (auto& d : domains)
        std::sort(d.masses.begin(), d.masses.end(),
                  [](const FocalSet& a, const FocalSet& b) { return a.event < b.event; });
    std::stable_sort(domains.begin(), domains.end(),
                     [](const DomainDecl& a, const DomainDecl& b) { return a.id < b.id; });
}

namespace {

std::string event_text(const DomainDecl* dom, EventMask e) {
    std::string s = "[";
    bool first = true;
    for (unsigned i = 0; i < 32; ++i) {
        if (!e.contains(i))
            continue;
        if (!first)
            s += ',';
        first = false;
        s += dom && i < dom->elements.size() ? dom->elements[i] : "?" + std::to_string(i);
    }
    return s + "]";
}

} // namespace

std::string pretty_print(const CaLProgram& p) {
    std::ostringstream os;
    for (const auto& d : p.domains) {
        os << "domain(" << d.id << ",[";
        for (std::size_t i = 0; i < d.elements.size(); ++i)
            os << (i ? "," : "") << d.elements[i];
        os << "]).\n";
        for (const auto& m : d.masses)
            os << "mass(" << d.id << "," << event_text(&d, m.event) << "," << format_number(m.mass) << ").\n";
    }
    for (const auto& f : p.prob_facts)
        os << format_number(f.prob) << "::" << f.atom.str() << ".\n";
    for (const auto& r : p.rules) {
        os << r.head.str();
        for (std::size_t i = 0; i < r.body.size(); ++i) {
            const BodyLiteral& l = r.body[i];
            os << (i ? ", " : " :- ");
            if (!l.positive)
                os << "\\+";
            if (l.kind == LiteralKind::belief)
                os << "belief(" << l.belief.domain << "," << event_text(p.find_domain(l.belief.domain), l.belief.event)
                   << ")";
            else
                os << l.atom.str();
        }
        os << ".\n";
    }
    return os.str();
}

} // namespace calp
