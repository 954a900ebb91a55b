#include <iostream>

#include "solspace/cli.hpp"

int main(int argc, char** argv) { return solspace::run_command(argc, argv, std::cout, std::cerr); }
