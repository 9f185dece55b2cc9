#include <iostream>
#include <string>
#include <vector>

#include "qheat/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return qheat::run_cli(std::move(args), std::cout, std::cerr);
}
