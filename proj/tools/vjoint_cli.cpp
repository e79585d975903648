#include <string>
#include <vector>

#include "vjoint/io/cli.hpp"

int main(int argc, char** argv) {
  return vjoint::io::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
