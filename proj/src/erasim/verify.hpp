#pragma once

#include <string>
#include <vector>

#include "erasim/trace.hpp"

namespace erasim {

struct CheckResult {
  std::string id;
  std::string description;
  bool pass = true;
  int first_violation_round = 0;  // 0 when pass or not round-specific
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool ok() const;
  const CheckResult* find(const std::string& id) const;
  std::string to_json() const;
  std::string to_text() const;
};

// Evaluates every per-round law of the scheme the trace was produced by,
// at every round boundary, against the recorded state snapshots:
//
// common       trace-structure, cost-monotone, output-match,
//              bound-communication, run-completed
// basic family state-delta, transcript-sync, post-termination-freeze,
//              noise-free-progress
// AGS family   state-delta, transcript-sync, post-termination-silence,
//              progress-two-rounds, cost-bound, round-lag,
//              termination-phase-stall, bound-rounds, semi-termination
//
// Failures are report entries, never exceptions.
VerifyReport verify_trace(const RunTrace& trace);

}  // namespace erasim
