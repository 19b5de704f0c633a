#include <iostream>
#include <string>
#include <vector>

#include "rdp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rdp::cli::run_command(args, std::cout, std::cerr);
}
