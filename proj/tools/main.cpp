#include <iostream>

#include "puzzlelab/cli.hpp"

int main(int argc, char** argv) { return puzzlelab::cli::run(argc, argv, std::cout, std::cerr); }
