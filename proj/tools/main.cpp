#include <cstdio>
#include <string>
#include <vector>

#include "stocheck/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const stocheck::CliResult res = stocheck::run_cli(args);
  if (!res.report.empty()) std::fputs(res.report.c_str(), stdout);
  if (!res.message.empty()) {
    std::fputs(res.message.c_str(), res.exit_code == 0 ? stdout : stderr);
    std::fputc('\n', res.exit_code == 0 ? stdout : stderr);
  }
  return res.exit_code;
}
