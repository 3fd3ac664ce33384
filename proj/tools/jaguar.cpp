#include <iostream>

#include "jaguar/cli.hpp"

int main(int argc, char** argv) { return jaguar::run_cli(argc, argv, std::cout, std::cerr); }
