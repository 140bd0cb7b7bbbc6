#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sievecalc/site.hpp"

namespace sievecalc::selftest {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // first failure, or a short summary of what ran
};

// The acceptance criteria that run against the library alone (the CLI
// determinism criterion lives with the CLI tests). Criteria with randomized
// sweeps draw from the given seed; identical seeds give identical runs.
std::vector<CriterionResult> run_criteria(std::uint64_t seed, const Guard& guard = {});

// One line per criterion: "criterion N: PASS/FAIL — name (detail)".
std::string format_results(const std::vector<CriterionResult>& results);
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace sievecalc::selftest
