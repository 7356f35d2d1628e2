#include <iostream>
#include <string>
#include <vector>

#include "hdrtrain/cli.hpp"

int main(int argc, char** argv) {
  return hdrtrain::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
