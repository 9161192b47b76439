#include <iostream>

#include "puw/cli.hpp"

int main(int argc, char** argv) { return puw::run_cli(argc, argv, std::cout, std::cerr); }
