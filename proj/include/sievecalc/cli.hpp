#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sievecalc::cli {

// Runs one batch invocation. Exit codes: 0 success, 1 domain error (a JSON
// error document goes to `out`), 2 usage error (message to `err`). Outputs
// are byte-deterministic for identical inputs.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sievecalc::cli
