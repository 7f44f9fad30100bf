#include <iostream>

#include "disxy/cli.hpp"

int main(int argc, char** argv) { return disxy::run_cli(argc, argv, std::cout, std::cerr); }
