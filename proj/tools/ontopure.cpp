#include <iostream>

#include "ontopure/cli.hpp"

int main(int argc, char** argv) { return ontopure::cli::run(argc, argv, std::cout, std::cerr); }
