#include <iostream>

#include "icecast_cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return icecast::cli::run(args, std::cout, std::cerr);
}
