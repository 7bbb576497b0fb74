#include <iostream>

#include "hammersley/cli.hpp"

int main(int argc, char** argv) { return hammersley::cli::main(argc, argv, std::cout, std::cerr); }
