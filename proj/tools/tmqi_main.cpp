#include <iostream>

#include "tmqi/cli.hpp"

int main(int argc, char** argv) { return tmqi::cli::run(argc, argv, std::cout, std::cerr); }
