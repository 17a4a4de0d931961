#include <iostream>

#include "sqfree/cli.hpp"

int main(int argc, char** argv) { return sqfree::run_cli(argc, argv, std::cout, std::cerr); }
