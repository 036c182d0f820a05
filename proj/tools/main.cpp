#include "cibn/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return cibn::run_cli(argc, argv, std::cout, std::cerr);
}
