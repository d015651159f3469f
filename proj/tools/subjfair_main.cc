#include <iostream>
#include <string>
#include <vector>

#include "subjfair/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return subjfair::RunCli(args, std::cout, std::cerr);
}
