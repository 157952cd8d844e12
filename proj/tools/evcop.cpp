#include <iostream>

#include "evcop/cli.hpp"

int main(int argc, char** argv) { return evcop::cli::run(argc, argv, std::cout, std::cerr); }
