// Acceptance suite: one line per criterion, exit status 1 if any fails.
#include <cstdio>
#include <cstdlib>
#include <string>

#include "tforge/verify/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240601;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  bool all = true;
  for (const auto& r : tforge::accept::run_all(seed)) {
    std::printf("criterion %2d: %s  %s (%s; %.2fs)\n", r.id, r.pass ? "PASS" : "FAIL",
                r.title.c_str(), r.detail.c_str(), r.seconds);
    all = all && r.pass;
  }
  std::fflush(stdout);
  return all ? 0 : 1;
}
