#pragma once
// Cross-module invariant suite, runnable from the CLI. Each check exercises
// one structural identity (product formula, kernel membership, norm windows,
// replay stability, ...) on seeded instances and reports pass/fail with a
// short diagnostic. Deterministic for a fixed seed.
#include <cstdint>
#include <string>
#include <vector>

namespace tsd {

struct SelftestResult {
  std::string suite; // module exercised
  std::string name;  // invariant checked
  bool pass = false;
  std::string detail; // measured values; empty when unremarkable
};

std::vector<SelftestResult> run_selftest(std::uint64_t seed);

bool all_pass(const std::vector<SelftestResult>& results);

} // namespace tsd
