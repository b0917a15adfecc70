#include <iostream>
#include <string>
#include <vector>

#include "qmeq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qmeq::run_command(args, std::cout, std::cerr);
}
