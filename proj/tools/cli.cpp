#include "cli.hpp"

#include "calp/engine.hpp"
#include "calp/error.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace calp::cli {

namespace {

using json = nlohmann::ordered_json;

struct Config {
    std::string program_path;
    std::string query;
    std::string method = "both";
    bool json = false;
    std::uint64_t world_cap = default_world_cap;
    bool list_worlds = false;
    bool list_explanations = false;
};

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string interval6(const CapacityInterval& c) { return "[" + fixed6(c.lo()) + ", " + fixed6(c.hi()) + "]"; }

std::string world_text(const GroundProgram& g, const BeliefWorld& w) {
    std::string s = "{";
    const auto atoms = w.chosen_atoms(g);
    for (std::size_t i = 0; i < atoms.size(); ++i)
        s += (i ? "," : "") + atoms[i];
    s += "}";
    for (std::size_t d = 0; d < g.domains.size(); ++d) {
        s += " " + g.domains[d].id() + "=[";
        const auto names = g.domains[d].frame().names(w.events[d]);
        for (std::size_t i = 0; i < names.size(); ++i)
            s += (i ? "," : "") + names[i];
        s += "]";
    }
    return s;
}

std::set<std::string> defined_signatures(const CaLProgram& p) {
    std::set<std::string> out;
    for (const auto& r : p.rules)
        out.insert(r.head.signature());
    for (const auto& f : p.prob_facts)
        out.insert(f.atom.signature());
    return out;
}

int query(const Config& cfg, std::ostream& out, std::ostream& err) {
    const auto method = parse_method(cfg.method);
    if (!method) {
        err << "error: --method must be one of both, worlds, explanations\n";
        return diagnostics;
    }
    if (cfg.query.empty()) {
        err << "error: --query must name a ground atom\n";
        return diagnostics;
    }
    std::ifstream in(cfg.program_path, std::ios::binary);
    if (!in) {
        err << "error: cannot read " << cfg.program_path << "\n";
        return diagnostics;
    }
    std::ostringstream text;
    text << in.rdbuf();

    const ParseResult parsed = parse_program(text.str());
    if (!parsed.ok()) {
        for (const auto& d : parsed.diagnostics)
            err << cfg.program_path << ":" << d.str() << "\n";
        return diagnostics;
    }
    const AtomParse q = parse_atom(cfg.query);
    if (!q.atom) {
        for (const auto& d : q.diagnostics)
            err << "query:" << d.str() << "\n";
        return diagnostics;
    }
    if (!defined_signatures(parsed.program).contains(q.atom->signature())) {
        err << "error: predicate " << q.atom->signature() << " of the query is not defined by the program\n";
        return diagnostics;
    }
    const std::string qtext = q.atom->str();

    const GroundProgram g = ground(parsed.program);
    if (!g.stratification().stratified) {
        err << "error: program is not stratified; negative cycle through";
        for (const auto& s : g.stratification().offending_cycle)
            err << " " << s;
        err << "\n";
        return diagnostics;
    }

    const EngineOptions opts{cfg.world_cap};
    const QueryResult r = answer_query(g, qtext, opts, *method);
    std::vector<std::string> diags = g.warnings;
    diags.insert(diags.end(), r.diagnostics.begin(), r.diagnostics.end());

    json worlds = json::array();
    std::vector<std::string> world_lines;
    if (cfg.list_worlds) {
        const WorldIndex idx(g, cfg.world_cap);
        const auto atom = g.find_atom(qtext);
        ModelEvaluator ev(g);
        idx.for_each([&](std::uint64_t i, const BeliefWorld& w) {
            const CapacityInterval beta = world_capacity(w, g);
            const bool holds = atom && ev.entails(w.view(), *atom);
            if (cfg.json)
                worlds.push_back({{"index", i}, {"world", world_text(g, w)}, {"lo", beta.lo()}, {"hi", beta.hi()},
                                  {"entails", holds}});
            else
                world_lines.push_back(std::to_string(i) + " " + world_text(g, w) + " " + interval6(beta) + " " +
                                      (holds ? "1" : "0"));
        });
    }
    std::vector<std::string> explanations;
    if (cfg.list_explanations)
        for (const auto& k : find_covering_explanations(g, qtext, opts))
            explanations.push_back(k.str(g));

    if (cfg.json) {
        json j;
        j["query"] = r.query;
        j["belief"] = r.reported.lo();
        j["plausibility"] = r.reported.hi();
        j["method"] = std::string(to_string(r.method));
        j["agree"] = r.agree;
        j["clamped"] = r.clamped;
        j["diagnostics"] = diags;
        if (cfg.list_worlds)
            j["worlds"] = worlds;
        if (cfg.list_explanations)
            j["explanations"] = explanations;
        out << j.dump(2) << "\n";
        return ok;
    }

    for (const auto& line : world_lines)
        out << "world " << line << "\n";
    for (const auto& e : explanations)
        out << "explanation " << e << "\n";
    out << "query: " << r.query << "\n";
    out << "belief: " << fixed6(r.reported.lo()) << "\n";
    out << "plausibility: " << fixed6(r.reported.hi()) << "\n";
    out << "method: " << to_string(r.method) << "\n";
    if (r.by_explanations)
        out << "by explanations: " << interval6(*r.by_explanations) << "\n";
    if (r.by_worlds)
        out << "by worlds: " << interval6(*r.by_worlds) << "\n";
    out << "agree: " << (r.agree ? "yes" : "no") << "\n";
    out << "clamped: " << (r.clamped ? "yes" : "no") << "\n";
    for (const auto& d : diags)
        out << "diagnostic: " << d << "\n";
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Credal and belief-annotated logic programs: query answering", "calp"};
    app.require_subcommand(1);
    Config cfg;
    auto* q = app.add_subcommand("query", "answer one query against a program");
    q->add_option("file", cfg.program_path, "program file")->required();
    q->add_option("--query,-q", cfg.query, "ground query atom")->required();
    q->add_option("--method", cfg.method, "both, worlds or explanations")
        ->check(CLI::IsMember({"both", "worlds", "explanations"}));
    q->add_flag("--json", cfg.json, "machine-readable output");
    q->add_option("--world-cap", cfg.world_cap, "maximum number of worlds")->check(CLI::PositiveNumber);
    q->add_flag("--list-worlds", cfg.list_worlds, "print every world");
    q->add_flag("--list-explanations", cfg.list_explanations, "print the covering explanations");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return diagnostics;
    }

    try {
        return query(cfg, out, err);
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << "\n";
        return resource;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return resource;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return diagnostics;
    }
}

} // namespace calp::cli
