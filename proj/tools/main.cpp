#include <iostream>
#include <string>
#include <vector>

#include "bdz/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return bdz::cli::run(args, std::cout, std::cerr);
}
