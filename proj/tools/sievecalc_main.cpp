#include <iostream>
#include <vector>

#include "sievecalc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sievecalc::cli::run(args, std::cout, std::cerr);
}
