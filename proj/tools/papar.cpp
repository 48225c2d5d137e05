#include <iostream>

#include "papar/cli.hpp"

int main(int argc, char** argv) { return papar::run_cli(argc, argv, std::cout, std::cerr); }
