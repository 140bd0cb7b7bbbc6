// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Criteria 1-10 exercise the library; criterion 11 drives the CLI layer
// twice per verb and requires byte-identical output.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sievecalc/cli.hpp"
#include "sievecalc/selftest.hpp"

namespace {

using sievecalc::selftest::CriterionResult;

CriterionResult criterion_11() {
    CriterionResult result{11, "CLI determinism", true, ""};
    auto start = std::chrono::steady_clock::now();

    const char* c2 = R"({"objects":["a","b"],"arrows":[{"name":"f","dom":"a","cod":"b"}],"compose":[]})";
    std::vector<std::vector<std::string>> invocations = {
        {"validate", "--category", c2},
        {"sieves", "--builtin", "SPAN"},
        {"topologies", "--builtin", "C2"},
        {"lattice", "--builtin", "C2"},
        {"lattice", "--builtin", "M2", "--format", "dot"},
        {"generate", "--builtin", "C2", "--family", R"({"sieves":[{"on":"a","arrows":[]}]})"},
        {"meet", "--builtin", "C2", "--j1", "top", "--j2", "bottom"},
        {"join", "--builtin", "SPAN", "--j1", "bottom", "--j2", "top"},
        {"implies", "--builtin", "C2", "--j1", "top", "--j2", "bottom"},
        {"neg", "--builtin", "M2", "--j", "bottom"},
        {"closure", "--builtin", "C2", "--j", "top", "--sieve", R"({"on":"b","arrows":[]})"},
        {"open", "--builtin", "C2", "--j", "bottom", "--ideal", R"({"objects":["a"]})"},
        {"closed", "--builtin", "C2", "--j", "bottom", "--ideal", R"({"objects":["a"]})"},
        {"qc", "--builtin", "SPAN", "--j", "bottom", "--ideal", R"({"objects":[]})"},
        {"booleanize", "--builtin", "SPAN", "--j", "bottom"},
        {"factor", "--builtin", "C2", "--j", "bottom", "--jp", "top"},
        {"dense", "--builtin", "C2", "--j", "bottom", "--jp", "top"},
        {"skeletal", "--builtin", "D2", "--j", "bottom", "--jp", "top"},
        {"atoms", "--builtin", "SPAN", "--j", "bottom"},
        {"ideals", "--builtin", "SPAN"},
        {"ideals", "--builtin", "C2", "--j", "bottom"},
        {"prove", "--builtin", "C2", "--axioms", R"({"sieves":[{"on":"a","arrows":[]}]})",
         "--target", R"({"on":"b","arrows":[]})"},
        {"check", "--builtin", "C2", "--axioms", R"({"sieves":[]})", "--derivation",
         R"({"rule":"AxiomMaximal","conclusion":{"on":"a","arrows":["1_a"]}})"},
        {"selftest", "--seed", "7"},
    };

    for (const auto& args : invocations) {
        std::ostringstream out1, err1, out2, err2;
        int code1 = sievecalc::cli::run(args, out1, err1);
        int code2 = sievecalc::cli::run(args, out2, err2);
        if (code1 != code2 || out1.str() != out2.str()) {
            result.pass = false;
            result.detail = "verb '" + args[0] + "' is not byte-deterministic";
            return result;
        }
        if (args[0] != "validate" && code1 != 0) {
            result.pass = false;
            result.detail = "verb '" + args[0] + "' failed unexpectedly";
            return result;
        }
    }

    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    if (elapsed >= 300.0) {
        result.pass = false;
        result.detail = "selftest did not finish inside 5 minutes";
        return result;
    }
    result.detail = "every verb byte-identical across runs, selftest within budget";
    return result;
}

}  // namespace

int main() {
    auto results = sievecalc::selftest::run_criteria(1, sievecalc::Guard{});
    results.push_back(criterion_11());

    std::cout << sievecalc::selftest::format_results(results);
    return sievecalc::selftest::all_passed(results) ? 0 : 1;
}
