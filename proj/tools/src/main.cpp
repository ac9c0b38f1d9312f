#include <iostream>

#include "cadefect_cli/cli.hpp"

int main(int argc, char** argv) { return cadefect::cli::run(argc, argv, std::cout, std::cerr); }
