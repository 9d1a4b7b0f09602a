#include <iostream>

#include "lazylab/cli.hpp"

int main(int argc, char** argv) {
  return lazylab::cli::run(argc, argv, std::cout, std::cerr);
}
