#include <iostream>

#include "qmorse/cli.hpp"

int main(int argc, char** argv) { return qmorse::run_cli(argc, argv, std::cout, std::cerr); }
