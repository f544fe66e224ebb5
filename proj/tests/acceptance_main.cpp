// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.

#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>

#include "rsflat/acceptance.hpp"

int main(int argc, char** argv) {
  rsflat::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
    else if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc)
      opt.jobs = std::atoi(argv[++i]);
    else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc)
      opt.seed = std::strtoull(argv[++i], nullptr, 10);
    else {
      std::cerr << "usage: rsflat_acceptance [--quick] [--jobs N] [--seed S]\n";
      return 2;
    }
  }
  const auto results = rsflat::run_acceptance(opt);
  std::cout << rsflat::format_report(results);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}
