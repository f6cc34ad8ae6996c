#pragma once

#include <string>
#include <vector>

#include "erasim/protocol.hpp"
#include "erasim/trace.hpp"

namespace erasim {

struct SweepRow {
  double delta = -1.0;  // < 0 for budget-driven rows
  int64_t budget = 0;
  int64_t erasures_used = 0;
  int64_t transmissions = 0;
  int64_t cc_bits = 0;
  int64_t rc_timesteps = 0;
  double rate = 0.0;           // protocol bits / bits on the wire
  double rate_analytic = 0.0;  // 1/2 - delta (delta sweeps only)
  // Extra wire bits paid per erasure relative to the noise-free run; the
  // asymptote for the basic scheme is 4.
  double waste_bits_per_erasure = 0.0;
  double waste_analytic = 4.0;
};

// Worst-case rows under the greedy adversary with budgets 0..t_max.
std::vector<SweepRow> sweep_budget(SchemeId scheme, const Protocol& pi,
                                   const Bits& x, const Bits& y,
                                   int64_t t_max);

// One row per noise fraction delta in [0, 1/2): the budget is the largest
// T consistent with T <= delta * (N + 2T) transmissions.
std::vector<SweepRow> sweep_delta(SchemeId scheme, const Protocol& pi,
                                  const Bits& x, const Bits& y,
                                  const std::vector<double>& deltas);

std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool delta_mode);

}  // namespace erasim
