#include <iostream>

#include "anomal/cli.hpp"

int main(int argc, char** argv) {
    return anomal::run_cli(argc, argv, std::cout, std::cerr);
}
