#include <iostream>

#include "replilearn/cli.hpp"

int main(int argc, char** argv) {
  return replilearn::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
