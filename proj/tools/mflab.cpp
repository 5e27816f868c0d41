#include <iostream>

#include "mflab/commands.hpp"

int main(int argc, char** argv) {
  return mflab::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
