#include <string>
#include <vector>

#include "linklogic/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return linklogic::run_cli(args);
}
