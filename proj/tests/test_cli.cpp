#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sievecalc/cli.hpp"
#include "sievecalc/json_io.hpp"
#include "sievecalc/subtopos.hpp"

using namespace sievecalc;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kC2 = R"({"objects":["a","b"],"arrows":[{"name":"f","dom":"a","cod":"b"}],"compose":[]})";

}  // namespace

TEST_CASE("topologies verb enumerates C2") {
    RunResult r = run_cli({"topologies", "--category", kC2});
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc.is_array());
    CHECK(doc.size() == 4);
    CHECK(doc[0]["covers"]["a"] == Json::parse(R"([["1_a"]])"));
    CHECK(doc[1]["covers"]["b"] == Json::parse(R"([["1_b","f"],["f"]])"));
}

TEST_CASE("lattice verb emits the diamond in dot format") {
    RunResult r = run_cli({"lattice", "--builtin", "C2", "--format", "dot"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("digraph lattice") != std::string::npos);
    CHECK(r.out.find("J0 -> J1") != std::string::npos);
    CHECK(r.out.find("J0 -> J2") != std::string::npos);
    CHECK(r.out.find("J1 -> J3") != std::string::npos);
    CHECK(r.out.find("J2 -> J3") != std::string::npos);
}

TEST_CASE("prove verb returns an axiom derivation") {
    RunResult r = run_cli({"prove", "--builtin", "C2", "--axioms",
                           R"({"sieves":[{"on":"a","arrows":[]}]})", "--target",
                           R"({"on":"a","arrows":[]})"});
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["rule"] == "AxiomGiven");
    CHECK(doc["conclusion"] == Json::parse(R"({"on":"a","arrows":[]})"));
}

TEST_CASE("prove verb certifies failure with the saturated topology") {
    RunResult r = run_cli({"prove", "--builtin", "C2", "--axioms",
                           R"({"sieves":[{"on":"b","arrows":["f"]}]})", "--target",
                           R"({"on":"b","arrows":[]})"});
    REQUIRE(r.code == 0);
    Json doc = Json::parse(r.out);
    CHECK(doc["provable"] == false);
    CHECK(doc["saturated"]["covers"]["b"] == Json::parse(R"([["1_b","f"],["f"]])"));
}

TEST_CASE("check verb validates a round-tripped derivation") {
    RunResult proof = run_cli({"prove", "--builtin", "C2", "--axioms",
                               R"({"sieves":[{"on":"b","arrows":["f"]}]})", "--target",
                               R"({"on":"a","arrows":["1_a"]})"});
    REQUIRE(proof.code == 0);
    std::string derivation = proof.out;
    derivation.pop_back();  // trailing newline

    RunResult r = run_cli({"check", "--builtin", "C2", "--axioms",
                           R"({"sieves":[{"on":"b","arrows":["f"]}]})", "--derivation",
                           derivation});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["valid"] == true);
}

TEST_CASE("validate verb reports violations and exits nonzero") {
    RunResult ok = run_cli({"validate", "--category", kC2});
    CHECK(ok.code == 0);
    CHECK(Json::parse(ok.out)["valid"] == true);

    const char* broken = R"({"objects":["a","b"],
        "arrows":[{"name":"f","dom":"a","cod":"b"},{"name":"g","dom":"a","cod":"b"}],
        "compose":[["1_b","f","g"]]})";
    RunResult bad = run_cli({"validate", "--category", broken});
    CHECK(bad.code == 1);
    Json doc = Json::parse(bad.out);
    CHECK(doc["valid"] == false);
    CHECK(doc["violations"][0]["law"] == "identity law");
    CHECK(doc["violations"][0]["witness"] == "f");
}

TEST_CASE("domain errors produce machine-readable documents") {
    RunResult r = run_cli({"topologies", "--builtin", "NOPE"});
    CHECK(r.code == 1);
    Json doc = Json::parse(r.out);
    CHECK(doc["code"] == "domain");
    CHECK(doc["witness"] == "NOPE");
}

TEST_CASE("guard refusal names the bound") {
    RunResult r = run_cli({"topologies", "--builtin", "C2", "--guard", "3"});
    CHECK(r.code == 1);
    Json doc = Json::parse(r.out);
    CHECK(doc["code"] == "guard");
}

TEST_CASE("usage errors exit with 2") {
    RunResult r = run_cli({"no-such-verb"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());

    RunResult missing = run_cli({"meet", "--builtin", "C2"});
    CHECK(missing.code == 2);
}

TEST_CASE("every verb is deterministic across runs") {
    std::vector<std::vector<std::string>> invocations = {
        {"validate", "--category", kC2},
        {"sieves", "--builtin", "C2"},
        {"topologies", "--builtin", "C2"},
        {"lattice", "--builtin", "C2"},
        {"lattice", "--builtin", "C2", "--format", "dot"},
        {"generate", "--builtin", "C2", "--family", R"({"sieves":[{"on":"a","arrows":[]}]})"},
        {"meet", "--builtin", "C2", "--j1", "top", "--j2", "bottom"},
        {"join", "--builtin", "C2", "--j1", "bottom", "--j2", "top"},
        {"implies", "--builtin", "C2", "--j1", "top", "--j2", "bottom"},
        {"neg", "--builtin", "C2", "--j", "bottom"},
        {"closure", "--builtin", "C2", "--j", "top", "--sieve", R"({"on":"b","arrows":[]})"},
        {"open", "--builtin", "C2", "--j", "bottom", "--ideal", R"({"objects":["a"]})"},
        {"closed", "--builtin", "C2", "--j", "bottom", "--ideal", R"({"objects":["a"]})"},
        {"qc", "--builtin", "C2", "--j", "bottom", "--ideal", R"({"objects":[]})"},
        {"booleanize", "--builtin", "C2", "--j", "bottom"},
        {"factor", "--builtin", "C2", "--j", "bottom", "--jp", "top"},
        {"dense", "--builtin", "C2", "--j", "bottom", "--jp", "top"},
        {"skeletal", "--builtin", "C2", "--j", "bottom", "--jp", "top"},
        {"atoms", "--builtin", "C2", "--j", "bottom"},
        {"ideals", "--builtin", "C2"},
        {"ideals", "--builtin", "C2", "--j", "bottom"},
        {"prove", "--builtin", "C2", "--axioms", R"({"sieves":[]})", "--target",
         R"({"on":"a","arrows":["1_a"]})"},
    };
    for (const auto& args : invocations) {
        RunResult first = run_cli(args);
        RunResult second = run_cli(args);
        CAPTURE(args[0]);
        CHECK(first.code == 0);
        CHECK(first.code == second.code);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("verbs are thin adapters over the library") {
    Site site(builtin("C2"));

    SieveFamily family(site);
    family.insert(0, 0);
    std::string expected = topology_doc(generate_topology(family)).dump() + "\n";
    RunResult generated = run_cli(
        {"generate", "--builtin", "C2", "--family", R"({"sieves":[{"on":"a","arrows":[]}]})"});
    CHECK(generated.out == expected);

    Topology bot = bottom(site);
    JIdeal u = make_j_ideal(bot, make_ideal(site.cat(), {0}));
    RunResult opened = run_cli(
        {"open", "--builtin", "C2", "--j", "bottom", "--ideal", R"({"objects":["a"]})"});
    CHECK(opened.out == topology_doc(open_topology(bot, u)).dump() + "\n");

    std::string lattice_direct = lattice_doc(enumerate_topologies(site)).dump() + "\n";
    CHECK(run_cli({"lattice", "--builtin", "C2"}).out == lattice_direct);
}

TEST_CASE("category files load from disk") {
    std::string path = "cli_test_c2.json";
    {
        std::ofstream file(path);
        file << kC2;
    }
    RunResult r = run_cli({"topologies", "--category", path});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out).size() == 4);
    std::remove(path.c_str());

    RunResult missing = run_cli({"topologies", "--category", "no_such_file.json"});
    CHECK(missing.code == 1);
    CHECK(Json::parse(missing.out)["code"] == "domain");
}

TEST_CASE("question-mark aliases are accepted") {
    RunResult r = run_cli({"dense?", "--builtin", "C2", "--j", "bottom", "--jp", "top"});
    CHECK(r.code == 0);
    CHECK(Json::parse(r.out)["result"] == false);
}

TEST_CASE("meet of the open and closed topologies over an ideal") {
    RunResult open = run_cli({"open", "--builtin", "C2", "--j", "bottom", "--ideal",
                              R"({"objects":["a"]})"});
    RunResult closed = run_cli({"closed", "--builtin", "C2", "--j", "bottom", "--ideal",
                                R"({"objects":["a"]})"});
    REQUIRE(open.code == 0);
    REQUIRE(closed.code == 0);
    std::string open_doc = open.out.substr(0, open.out.size() - 1);
    std::string closed_doc = closed.out.substr(0, closed.out.size() - 1);
    RunResult met = run_cli({"meet", "--builtin", "C2", "--j1", open_doc, "--j2", closed_doc});
    REQUIRE(met.code == 0);
    RunResult bot = run_cli({"neg", "--builtin", "C2", "--j", "top"});
    CHECK(met.out == bot.out);
}
