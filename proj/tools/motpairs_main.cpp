#include <iostream>

#include "motpairs/cli.hpp"

int main(int argc, char** argv) {
    return motpairs::cli::run(argc, argv, std::cout, std::cerr);
}
