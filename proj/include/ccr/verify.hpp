#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ccr {

struct VerifyOptions {
  std::size_t cases = 200;  // random cases per suite
  std::uint64_t seed = 2026;
  std::string only;  // substring filter on suite names, empty runs all
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  bool passed = true;
  std::string counterexample;  // first failing case, shrunk where possible
};

/// The randomized property suites behind `ccr verify`: welfare-oracle
/// equivalence, destabilization, vote-undo mechanics, smoothing shape,
/// sentinel behavior, tie handling, invariances, incremental agreement,
/// Pareto correctness, and scheduler determinism/uniformity.
std::vector<SuiteResult> run_property_suites(const VerifyOptions& options);

/// One line per suite; returns 0 when everything passed, 2 otherwise.
int report_suites(const std::vector<SuiteResult>& results, std::ostream& out);

}  // namespace ccr
