#include <iostream>
#include <string>
#include <vector>

#include "score_dag/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return score_dag::cli::run(args, std::cout, std::cerr);
}
