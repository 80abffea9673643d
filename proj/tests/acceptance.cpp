// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include "cli.hpp"
#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

using namespace calp;
using testing::load;

namespace {

constexpr double tol = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::vector<std::string> failures;

    void fail(std::string why) {
        pass = false;
        if (failures.size() < 5)
            failures.push_back(std::move(why));
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string show(const CapacityInterval& c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "[%.12g, %.12g]", c.lo(), c.hi());
    return buf;
}

GroundProgram corpus(const std::string& f) { return load(testing::read_file(testing::corpus_path(f))); }

Outcome pinned_capacities() {
    Outcome o;
    const auto g = corpus("urns.calp");
    const auto& u1 = g.domains[*g.domain_index("urn1")];
    auto ev = [&](std::vector<std::string> n) { return u1.frame().event(n); };
    auto expect = [&](const std::string& what, double got, double want) {
        if (std::fabs(got - want) > tol)
            o.fail(what + " = " + fmt(got) + ", expected " + fmt(want));
    };
    expect("Belief(urn1,{red,yellow})", u1.belief(ev({"red", "yellow"})), 0.3);
    expect("Plaus(urn1,{red,yellow})", u1.plausibility(ev({"red", "yellow"})), 0.9);
    const std::vector<BeliefFact> by{{"urn1", ev({"blue"})}, {"urn1", ev({"yellow"})}};
    const auto up = bp_upper(u1, by);
    expect("BP-upper urn1 lo", up.lo(), 0.7);
    expect("BP-upper urn1 hi", up.hi(), 0.7);
    const auto& u2 = g.domains[*g.domain_index("urn2")];
    const auto absent = bp_upper(u2, by);
    expect("BP-upper absent lo", absent.lo(), 1.0);
    expect("BP-upper absent hi", absent.hi(), 1.0);
    const auto ri = query_by_explanations(g, "r_indep");
    expect("r_indep lo", ri.lo(), 0.19);
    expect("r_indep hi", ri.hi(), 0.97);
    const auto rd = answer_query(g, "r_dep").reported;
    expect("r_dep lo", rd.lo(), 0.4);
    expect("r_dep hi", rd.hi(), 1.0);
    o.detail = "r_indep " + show(ri) + ", r_dep " + show(rd) + ", BP-upper " + show(up);
    return o;
}

Outcome normalization() {
    Outcome o;
    std::mt19937_64 rng(1001);
    testing::GenOptions opt;
    opt.max_facts = 6;
    opt.max_domains = 2;
    opt.max_frame = 4;
    double worst = 0.0;
    const int n = 60;
    for (int i = 0; i < n; ++i) {
        const auto t = testing::random_program(rng, opt);
        const auto g = load(t.render());
        const auto x = xi_B(enumerate_worlds(g), g);
        const double dev = std::max(std::fabs(x.lo() - 1.0), std::fabs(x.hi() - 1.0));
        worst = std::max(worst, dev);
        if (dev > tol)
            o.fail("program " + std::to_string(i) + ": " + show(x));
    }
    o.detail = std::to_string(n) + " programs, max deviation " + fmt(worst);
    return o;
}

Outcome problog_reduction() {
    Outcome o;
    std::mt19937_64 rng(1002);
    testing::GenOptions opt;
    opt.beliefs = false;
    opt.max_facts = 8;
    opt.max_rules = 10;
    opt.max_derived = 6;
    const int n = 120;
    std::size_t queries = 0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto t = testing::random_program(rng, opt);
        const auto g = load(t.render());
        for (unsigned a = 0; a < t.derived; ++a) {
            const auto q = testing::TProgram::atom(a);
            const double direct = t.problog_probability(a);
            const auto e = query_by_explanations(g, q);
            const auto w = query_by_worlds(g, q);
            const double dev = std::max({std::fabs(e.lo() - direct), std::fabs(e.hi() - direct),
                                         std::fabs(w.lo() - direct), std::fabs(w.hi() - direct)});
            worst = std::max(worst, dev);
            ++queries;
            if (dev > tol)
                o.fail("program " + std::to_string(i) + " " + q + ": explanations " + show(e) + ", worlds " + show(w) +
                       ", direct " + fmt(direct));
        }
    }
    o.detail = std::to_string(n) + " programs, " + std::to_string(queries) + " queries, max deviation " + fmt(worst);
    return o;
}

Outcome splitting() {
    Outcome o;
    std::mt19937_64 rng(1003);
    const int n = 150;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto inst = testing::random_split_instance(rng);
        const auto g = load(inst.program.render());
        const auto K = testing::random_choices(rng, g, inst);
        const auto P = make_pairwise_incompatible(K, g);
        for (std::size_t a = 0; a < P.size(); ++a)
            for (std::size_t b = a + 1; b < P.size(); ++b)
                if (P[a].unite(P[b]))
                    o.fail("instance " + std::to_string(i) + ": compatible pair " + P[a].str(g) + " " + P[b].str(g));
        if (compatible_worlds(P, g, default_world_cap, EventSpace::focal) !=
            compatible_worlds(K, g, default_world_cap, EventSpace::focal))
            o.fail("instance " + std::to_string(i) + ": compatible worlds changed");
        const auto base = xi_c(P, g);
        for (std::uint64_t s = 1; s <= 5; ++s) {
            const auto Q = make_pairwise_incompatible(K, g, SplitOrder{s * 1000003u + static_cast<std::uint64_t>(i)});
            if (!pairwise_incompatible(Q))
                o.fail("instance " + std::to_string(i) + ": seeded order left a compatible pair");
            const auto x = xi_c(Q, g);
            const double dev = std::max(std::fabs(x.lo() - base.lo()), std::fabs(x.hi() - base.hi()));
            worst = std::max(worst, dev);
            if (dev > tol)
                o.fail("instance " + std::to_string(i) + ": " + show(x) + " vs " + show(base));
        }
    }
    o.detail = std::to_string(n) + " choice sets, 6 orders each, max capacity spread " + fmt(worst);
    return o;
}

// Returns false on the first mismatch.
bool covering_ok(const GroundProgram& g, const std::string& q, std::string& why) {
    const auto K = find_covering_explanations(g, q);
    const auto atom = g.find_atom(q);
    ModelEvaluator ev(g);
    const WorldIndex idx(g);
    std::vector<std::uint8_t> sat(idx.size());
    bool ok = true;
    idx.for_each([&](std::uint64_t i, const BeliefWorld& w) {
        sat[i] = atom && ev.entails(w.view(), *atom);
        const bool covered = std::any_of(K.begin(), K.end(), [&](const CompositeChoice& k) { return k.admits(w); });
        if (ok && covered != (sat[i] != 0)) {
            ok = false;
            why = q + ": world " + std::to_string(i) + (sat[i] ? " entails but is not covered" : " covered but does not entail");
        }
    });
    for (const auto& k : K)
        for (const auto& w : compatible_worlds(k, g))
            if (ok && !sat[idx.index(w)]) {
                ok = false;
                why = q + ": explanation " + k.str(g) + " admits a world not entailing the query";
            }
    return ok;
}

Outcome covering() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& q : testing::corpus_queries()) {
        std::string why;
        ++checked;
        if (!covering_ok(corpus(q.file), q.query, why))
            o.fail(q.file + " " + why);
    }
    std::mt19937_64 rng(1005);
    testing::GenOptions opt;
    opt.max_facts = 3;
    opt.max_domains = 2;
    opt.max_frame = 3;
    const int n = 60;
    for (int i = 0; i < n; ++i) {
        const auto t = testing::random_program(rng, opt);
        const auto g = load(t.render());
        for (unsigned a = 0; a < t.derived; ++a) {
            std::string why;
            ++checked;
            if (!covering_ok(g, testing::TProgram::atom(a), why))
                o.fail("random program " + std::to_string(i) + " " + why);
        }
    }
    o.detail = std::to_string(testing::corpus_queries().size()) + " corpus queries and " + std::to_string(n) +
               " random programs, " + std::to_string(checked) + " queries";
    return o;
}

Outcome capacity_axioms() {
    Outcome o;
    std::mt19937_64 rng(1006);
    std::vector<BeliefDomain> domains;
    for (const auto& f : testing::corpus_files())
        for (const auto& d : corpus(f).domains)
            domains.push_back(d);
    for (int i = 0; i < 200; ++i) {
        const auto t = testing::random_domain(rng, std::uniform_int_distribution<unsigned>(1, 6)(rng));
        std::vector<std::string> names;
        for (unsigned e = 0; e < t.size; ++e)
            names.push_back("e" + std::to_string(e));
        std::vector<FocalSet> fs;
        for (const auto& [bits, m] : t.focal)
            fs.push_back({EventMask(bits), m});
        domains.emplace_back(FrameOfDiscernment("r" + std::to_string(i), names), fs);
    }
    std::size_t events = 0, mono = 0;
    double rearranged = 0.0;
    for (const auto& d : domains) {
        const std::uint32_t full = d.frame().full().bits();
        for (std::uint32_t x = 0; x <= full; ++x) {
            const EventMask X(x), nX = d.complement(X);
            ++events;
            if (d.belief(X) > d.plausibility(X) + 1e-12)
                o.fail(d.id() + ": belief above plausibility at " + std::to_string(x));
            if (d.plausibility(nX) != 1.0 - d.belief(X))
                o.fail(d.id() + ": conjugacy broken at " + std::to_string(x));
            rearranged = std::max(rearranged, std::fabs(d.belief(X) - (1.0 - d.plausibility(nX))));
        }
    }
    std::uniform_int_distribution<std::size_t> pick(0, domains.size() - 1);
    while (mono < 2000) {
        const auto& d = domains[pick(rng)];
        const std::uint32_t full = d.frame().full().bits();
        const std::uint32_t a = std::uniform_int_distribution<std::uint32_t>(0, full)(rng);
        const std::uint32_t b = a | std::uniform_int_distribution<std::uint32_t>(0, full)(rng);
        ++mono;
        if (d.belief(EventMask(a)) > d.belief(EventMask(b)) + 1e-12 ||
            d.plausibility(EventMask(a)) > d.plausibility(EventMask(b)) + 1e-12)
            o.fail(d.id() + ": not monotone for " + std::to_string(a) + " within " + std::to_string(b));
    }
    o.detail = std::to_string(domains.size()) + " domains, " + std::to_string(events) + " events, " +
               std::to_string(mono) + " inclusion pairs; Plaus(not X) == 1 - Belief(X) bitwise, |Belief(X) - (1 - "
               "Plaus(not X))| <= " + fmt(rearranged);
    return o;
}

Outcome round_trip() {
    Outcome o;
    std::size_t n = 0;
    auto check = [&](const std::string& name, const std::string& text) {
        ++n;
        const auto p = parse_program(text);
        if (!p.ok()) {
            o.fail(name + ": does not parse");
            return;
        }
        const std::string printed = pretty_print(p.program);
        const auto q = parse_program(printed);
        if (!q.ok() || !(q.program == p.program) || pretty_print(q.program) != printed)
            o.fail(name + ": parse(print(p)) differs from p");
    };
    for (const auto& f : testing::corpus_files())
        check(f, testing::read_file(testing::corpus_path(f)));
    std::mt19937_64 rng(1007);
    for (int i = 0; i < 150; ++i)
        check("random " + std::to_string(i), testing::random_program(rng, {}).render());
    o.detail = std::to_string(n) + " programs";
    return o;
}

Outcome determinism() {
    Outcome o;
    std::size_t n = 0;
    for (const auto& q : testing::corpus_queries()) {
        const std::vector<std::string> args{"query", testing::corpus_path(q.file), "--query", q.query, "--json"};
        std::ostringstream a, b, ea, eb;
        const int ca = cli::run(args, a, ea), cb = cli::run(args, b, eb);
        ++n;
        if (ca != 0 || cb != 0)
            o.fail(q.file + " " + q.query + ": exit " + std::to_string(ca) + "/" + std::to_string(cb));
        else if (a.str() != b.str())
            o.fail(q.file + " " + q.query + ": outputs differ");
    }
    o.detail = std::to_string(n) + " corpus queries";
    return o;
}

} // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 pinned capacities", pinned_capacities},
        {"2 normalization of belief worlds", normalization},
        {"3 ProbLog reduction oracle", problog_reduction},
        {"4 splitting contracts", splitting},
        {"5 covering-set soundness and completeness", covering},
        {"6 capacity axioms", capacity_axioms},
        {"7 parser round trip", round_trip},
        {"8 determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %s: %s\n", r.pass ? "PASS" : "FAIL", name.c_str(), r.detail.c_str());
        for (const auto& f : r.failures)
            std::printf("    %s\n", f.c_str());
        failed += !r.pass;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of %zu criteria passed in %.2f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
                secs);
    return failed == 0 ? 0 : 1;
}
