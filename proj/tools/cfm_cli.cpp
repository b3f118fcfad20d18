#include <iostream>

#include "cfm/cli.hpp"

int main(int argc, char** argv) { return cfm::cli::main(argc, argv, std::cout, std::cerr); }
