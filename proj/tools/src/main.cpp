#include <iostream>
#include <string>
#include <vector>

#include "daaclab/cli.hpp"

int main(int argc, char** argv) {
  return daaclab::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
