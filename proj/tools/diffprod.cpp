#include <string>
#include <vector>

#include "diffprod/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return diffprod::cli::run(args);
}
