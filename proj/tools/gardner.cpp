#include <iostream>

#include "gardner/cli.hpp"

int main(int argc, char** argv) { return gardner::run_cli(argc, argv, std::cout, std::cerr); }
