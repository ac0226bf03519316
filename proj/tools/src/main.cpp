#include <iostream>

#include "qbayes/cli/run.hpp"

int main(int argc, char** argv) { return qbayes::cli::run(argc, argv, std::cout, std::cerr); }
