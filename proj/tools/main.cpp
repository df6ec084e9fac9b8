#include <iostream>

#include "fmmde/cli.hpp"

int main(int argc, char** argv) { return fmmde::run_cli(argc, argv, std::cout, std::cerr); }
