#include "cli.hpp"

#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <sstream>

using namespace calp;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/calp_cli_test_" + name;
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fputs(text.c_str(), f);
    std::fclose(f);
    return path;
}

std::size_t count_prefix(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);)
        n += line.rfind(prefix, 0) == 0;
    return n;
}

} // namespace

TEST_CASE("json result for r_indep by explanations") {
    const auto r = run({"query", testing::corpus_path("urns.calp"), "--query", "r_indep", "--method", "explanations",
                        "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["query"] == "r_indep");
    CHECK(j["belief"].get<double>() == doctest::Approx(0.19).epsilon(1e-9));
    CHECK(j["plausibility"].get<double>() == doctest::Approx(0.97).epsilon(1e-9));
    CHECK(j["method"] == "explanations");
    CHECK(j["agree"] == true);
    CHECK(j["clamped"] == false);
    CHECK(j["diagnostics"].is_array());
    CHECK(j.size() == 7);
}

TEST_CASE("noisy-or through the command line") {
    const auto r = run({"query", testing::corpus_path("problog_noisyor.calp"), "--query", "q", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["belief"].get<double>() == doctest::Approx(0.75));
    CHECK(j["plausibility"].get<double>() == doctest::Approx(0.75));
    CHECK(j["agree"] == true);
}

TEST_CASE("human output uses six decimals and matches json") {
    const auto h = run({"query", testing::corpus_path("urns.calp"), "--query", "win"});
    const auto j = nlohmann::json::parse(run({"query", testing::corpus_path("urns.calp"), "--query", "win", "--json"}).out);
    REQUIRE(h.code == 0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "belief: %.6f\n", j["belief"].get<double>());
    CHECK(h.out.find(buf) != std::string::npos);
    std::snprintf(buf, sizeof buf, "plausibility: %.6f\n", j["plausibility"].get<double>());
    CHECK(h.out.find(buf) != std::string::npos);
    CHECK(h.out.find("agree: no") != std::string::npos);
}

TEST_CASE("usage errors and diagnostics exit with 1") {
    CHECK(run({"query", testing::corpus_path("urns.calp"), "--query", ""}).code == 1);
    CHECK(run({"query", testing::corpus_path("urns.calp")}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"query", testing::corpus_path("urns.calp"), "--query", "r_dep", "--method", "bdd"}).code == 1);
    CHECK(run({"query", "/nonexistent/file.calp", "--query", "q"}).code == 1);
    CHECK(run({"query", testing::corpus_path("urns.calp"), "--query", "q(X)"}).code == 1);
    CHECK(run({"query", testing::corpus_path("urns.calp"), "--query", "undefined_thing"}).code == 1);

    const auto bad = temp_file("bad.calp", "domain(d, [a]).\nmass(d, [b], 1.0).\np :- q$.\n");
    const auto r = run({"query", bad, "--query", "p"});
    CHECK(r.code == 1);
    CHECK(r.err.find(":2:") != std::string::npos);
    CHECK(r.err.find("UNKNOWN_ELEMENT") != std::string::npos);
    CHECK(r.err.find("LEX_ERROR") != std::string::npos);

    const auto cyc = temp_file("cyc.calp", "0.5::f. p :- \\+ q, f. q :- \\+ p, f.\n");
    const auto c = run({"query", cyc, "--query", "p"});
    CHECK(c.code == 1);
    CHECK(c.err.find("stratified") != std::string::npos);
}

TEST_CASE("resource errors exit with 2") {
    const auto r = run({"query", testing::corpus_path("urns.calp"), "--query", "r_dep", "--world-cap", "10"});
    CHECK(r.code == 2);
    CHECK(r.err.find("cap") != std::string::npos);
}

TEST_CASE("help exits with 0") {
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"query", "--help"}).code == 0);
}

TEST_CASE("listing worlds") {
    const auto one = temp_file("urn1.calp", "domain(urn1, [blue, red, yellow]).\nmass(urn1, [blue], 0.1).\n"
                                            "mass(urn1, [red], 0.3).\nmass(urn1, [blue, yellow], 0.6).\n"
                                            "q :- belief(urn1, [blue]).\n");
    const auto r = run({"query", one, "--query", "q", "--list-worlds"});
    REQUIRE(r.code == 0);
    CHECK(count_prefix(r.out, "world ") == 7);

    const auto two = temp_file("two.calp", "0.5::a. 0.5::b. q :- a, b.\n");
    const auto s = run({"query", two, "--query", "q", "--list-worlds"});
    CHECK(count_prefix(s.out, "world ") == 4);

    const auto g = testing::load(testing::read_file(one));
    const auto j = nlohmann::json::parse(run({"query", one, "--query", "q", "--list-worlds", "--json"}).out);
    const auto ws = enumerate_worlds(g);
    REQUIRE(j["worlds"].size() == ws.size());
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto c = world_capacity(ws[i], g);
        CHECK(j["worlds"][i]["lo"].get<double>() == c.lo());
        CHECK(j["worlds"][i]["hi"].get<double>() == c.hi());
    }
}

TEST_CASE("listing explanations") {
    const auto r = run({"query", testing::corpus_path("r_indep.calp"), "--query", "r_indep", "--list-explanations"});
    REQUIRE(r.code == 0);
    CHECK(count_prefix(r.out, "explanation ") == 2);
    CHECK(r.out.find("belief(urn1,[blue])") != std::string::npos);
    CHECK(r.out.find("belief(urn2,[orange])") != std::string::npos);
}

TEST_CASE("json output is byte-identical across runs") {
    for (const auto& q : testing::corpus_queries()) {
        const std::vector<std::string> args{"query", testing::corpus_path(q.file), "--query", q.query, "--json"};
        const auto a = run(args), b = run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
    }
}
