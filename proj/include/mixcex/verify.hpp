#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixcex/counterexample.hpp"

namespace mixcex {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values and the bounds they were held to
  double runtime_s = 0;
};

struct VerifyOptions {
  int depth = 5;  // the default desk-scale instance
  Rat ratio = Rat(1);
  long mc_samples = 100000;
  std::uint64_t mc_seed = 20260809;
  int threads = 1;
};

// Runs the full acceptance suite (nine checks, each pinned to its tolerance)
// and returns one result per check.
std::vector<CheckResult> run_acceptance(const VerifyOptions& opt);

bool all_pass(const std::vector<CheckResult>& results);

// Canonical report document.  Runtimes are volatile, so they are only
// included on request; the default document is byte-stable across runs.
nlohmann::json verify_report(const std::vector<CheckResult>& results, bool include_runtimes);

}  // namespace mixcex
