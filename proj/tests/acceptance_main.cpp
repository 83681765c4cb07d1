#include <chrono>
#include <cstdio>
#include <string>

#include "optseq/acceptance.hpp"

int main(int argc, char** argv) {
  optseq::RunConfig cfg;
  if (argc > 1) cfg.seed = std::stoull(argv[1]);
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = optseq::run_acceptance(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& line : report.lines) std::printf("%s\n", optseq::format_line(line).c_str());
  std::size_t passed = 0;
  for (const auto& line : report.lines) passed += line.pass;
  std::printf("%zu/%zu criteria passed in %.1f s\n", passed, report.lines.size(), secs);
  return report.all_pass() ? 0 : 1;
}
