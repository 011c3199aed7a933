#include <iostream>

#include "graphcurv/cli.hpp"

int main(int argc, char** argv) {
  int status = 0;
  const auto req = graphcurv::cli::parseArgs(argc, argv, std::cerr, status);
  if (!req) return status;
  return graphcurv::cli::run(*req, std::cout, std::cerr);
}
