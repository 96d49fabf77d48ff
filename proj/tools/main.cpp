#include <iostream>

#include "actsig/cli.hpp"

int main(int argc, char** argv) { return actsig::run_cli(argc, argv, std::cout, std::cerr); }
