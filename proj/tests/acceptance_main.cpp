#include "ebp/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  std::uint64_t seed = 20240611;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  int failed = 0;
  for (const auto& c : ebp::acceptance_suite()) {
    const ebp::CriterionResult r = ebp::run_criterion(c, seed);
    std::printf("%s %2d %-30s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
