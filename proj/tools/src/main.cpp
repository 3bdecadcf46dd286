#include <iostream>

#include "glcn_cli/app.hpp"

int main(int argc, char** argv) {
  return glcn::cli::run_cli(argc, argv, std::cout, std::cerr);
}
