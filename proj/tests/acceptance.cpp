// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
// Tolerances are exact except the wall-time limits, which are pinned per
// criterion in the suite.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "cofin/verify/acceptance.hpp"

int main(int argc, char** argv) {
  cofin::verify::SuiteConfig cfg;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  bool all = true;
  for (auto& r : cofin::verify::run_suite(cfg, ids)) {
    std::printf("%s criterion %2d  %-55s %7.2fs (limit %4.0fs)", r.pass() ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.limit_seconds);
    for (auto& [k, v] : r.metrics) std::printf(" %s=%g", k.c_str(), v);
    std::printf("\n");
    for (auto& f : r.failures) std::printf("    - %s\n", f.c_str());
    all = all && r.pass();
  }
  return all ? 0 : 1;
}
