#include <string>
#include <vector>

#include "porank/cli.hpp"

int main(int argc, char** argv) {
  return porank::run_cli(std::vector<std::string>(argv, argv + argc));
}
