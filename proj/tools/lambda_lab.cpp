#include <iostream>

#include "lambda_lab/cli.hpp"

int main(int argc, char **argv) { return lambda_lab::cli::run(argc, argv, std::cout, std::cerr); }
