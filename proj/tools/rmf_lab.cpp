#include <iostream>

#include "rmf/cli.hpp"

int main(int argc, char** argv) {
    return rmf::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
