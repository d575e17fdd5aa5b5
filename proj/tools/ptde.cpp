#include <iostream>

#include "ptde/cli.hpp"

int main(int argc, char** argv) { return ptde::run_cli(argc, argv, std::cout, std::cerr); }
