#include <iostream>

#include "qlab/cli.hpp"

int main(int argc, char** argv) { return qlab::cli::main_entry(argc, argv, std::cout, std::cerr); }
