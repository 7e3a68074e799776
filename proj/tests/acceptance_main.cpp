// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure.  The same criteria back the `all-acceptance` CLI subcommand.

#include <cstdio>

#include "shmod/acceptance.hpp"

int main() {
  const auto results = shmod::acceptance::run_all();
  bool all_pass = true;
  std::printf("%-34s %-6s %8s  %s\n", "criterion", "result", "seconds", "detail");
  for (const auto& r : results) {
    std::printf("%-34s %-6s %8.1f  %s\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
    all_pass = all_pass && r.pass;
  }
  std::printf("%s\n", all_pass ? "ALL CRITERIA PASS" : "ACCEPTANCE FAILURE");
  return all_pass ? 0 : 1;
}
