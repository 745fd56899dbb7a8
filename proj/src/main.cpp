#include <cstdio>

#include "q2mpc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  q2mpc::CliResult r = q2mpc::cli_main(args);
  std::fputs(r.out.c_str(), stdout);
  return r.code;
}
