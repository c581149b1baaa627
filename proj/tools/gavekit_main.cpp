#include <vector>

#include "gavekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return gavekit::cli::run(args);
}
