#include <iostream>
#include <string>
#include <vector>

#include "loe/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return loe::run_cli(args, std::cout, std::cerr);
}
