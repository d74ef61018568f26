#include <iostream>

#include "mlstar/cli.hpp"

int main(int argc, char** argv) {
    return mlstar::cli::run(argc, argv, std::cout, std::cerr);
}
