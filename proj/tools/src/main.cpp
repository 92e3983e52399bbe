#include <iostream>
#include <string>
#include <vector>

#include "diffsub_cli/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dsub::cli::run(args, std::cout, std::cerr);
}
