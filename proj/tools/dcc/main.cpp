#include <iostream>
#include <string>
#include <vector>

#include "dc/io.hpp"

int main(int argc, char **argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dc::cli_run(args, std::cout, std::cerr);
}
