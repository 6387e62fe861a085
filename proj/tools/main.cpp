#include <iostream>

#include "ils/cli.hpp"

int main(int argc, char** argv) { return ils::cli::run(argc, argv, std::cout, std::cerr); }
