#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rsflat {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool quick = false;  // oracle + invariant subset only
  int jobs = 2;
  std::uint64_t seed = 0;
};

// Runs the acceptance suite (all asymptotic-law and oracle criteria).
// Deterministic for a fixed seed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

struct InvariantStats {
  int cases = 0;
  int failures = 0;
  std::vector<std::string> messages;  // first few failure descriptions
};

// Randomized property checks over every module's invariants.
InvariantStats run_invariant_suite(std::uint64_t seed, int target_cases);

// Formats one "<id> PASS/FAIL name (detail)" line per criterion.
std::string format_report(const std::vector<CriterionResult>& results);

}  // namespace rsflat
