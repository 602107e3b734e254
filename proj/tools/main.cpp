#include <iostream>

#include "heavenly/cli.hpp"

int main(int argc, char** argv) { return heavenly::run_cli(argc, argv, std::cout, std::cerr); }
