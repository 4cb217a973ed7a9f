// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <iostream>
#include <string>
#include <vector>

#include "olsmub/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  const auto results = olsmub::run_acceptance(only);
  int failed = 0;
  for (const auto& r : results) {
    std::cout << olsmub::format_result(r) << '\n';
    failed += !olsmub::result_ok(r);
  }
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
