#include <iostream>
#include <string>
#include <vector>

#include "flannint/cli.hpp"

int main(int argc, char** argv) {
  return flannint::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
