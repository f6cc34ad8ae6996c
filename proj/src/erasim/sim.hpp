#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "erasim/channel.hpp"
#include "erasim/protocol.hpp"
#include "erasim/trace.hpp"

namespace erasim {

struct RunConfig {
  SchemeId scheme = SchemeId::basic4;
  const Protocol* protocol = nullptr;  // must be normalized
  Bits x, y;
  NoiseSource* noise = nullptr;  // nullptr = noise-free
  int64_t max_rounds = 0;        // 0 = automatic safety cap
  int settle_rounds = 3;         // AGS: silent rounds certifying semi-termination
  bool collect_trace = true;
};

struct RunResult {
  RunTrace trace;  // steps populated only when collect_trace was set
  Metrics metrics;
  Bits output_a, output_b;
  bool aborted = false;  // safety cap hit; trace is partial
  std::string abort_reason;
};

// Drives both parties in lockstep through the erasure channel. Odd
// timesteps carry Alice's token, even ones Bob's; once a party has
// terminated the harness materializes silence in its place (excluded from
// the communication counts). Basic-family runs end when Bob hears an
// unerased silence; AGS runs end at Alice's termination round and are then
// extended by `settle_rounds` noise-free rounds which must be all-silent
// for semi-termination to be certified.
RunResult run(const RunConfig& config);

int64_t default_max_rounds(int n, int64_t noise_budget);

struct SearchResult {
  int64_t patterns_tried = 0;
  bool all_outputs_correct = true;
  int64_t worst_transmissions = 0;
  int64_t worst_cc_bits = 0;
  int64_t worst_rc_timesteps = 0;
  int worst_t_b = 0;
  int64_t worst_erasures_counted = 0;  // erasures of the worst-transmission run
  NoisePattern worst_pattern;          // achieving worst_transmissions
};

// Brute-force oracle: runs every erasure pattern with at most `budget`
// erasures inside wire timesteps 1..horizon and aggregates the worst-case
// metrics, checking output correctness of every run. Refuses when the
// pattern count exceeds `max_patterns` (0 = ERASURESIM_MAX_PATTERNS env
// var, default 5000000). per_run, if set, observes every pattern/run pair.
using SearchObserver =
    std::function<void(const NoisePattern&, const RunResult&)>;
SearchResult exhaustive_noise_search(SchemeId scheme, const Protocol& pi,
                                     const Bits& x, const Bits& y, int budget,
                                     int64_t horizon, int settle_rounds = 3,
                                     int64_t max_patterns = 0,
                                     const SearchObserver& per_run = {});

int64_t count_patterns(int64_t horizon, int budget);

struct UnsyncDemo {
  NoisePattern pattern;
  RunResult result;
  int gap = 0;           // t_b - t_a achieved
  int64_t erasures = 0;  // erasures spent (= gap - 1)
};

// Constructs the pattern that stalls Bob's termination in the basic
// 4-ary scheme by erasing the silence he would hear for gap-1 consecutive
// rounds after Alice exits, then runs it: the two termination times end up
// exactly `gap` rounds apart at a cost of gap-1 erasures. Arbitrarily
// large gaps demonstrate that termination cannot be coordinated under
// unbounded noise.
UnsyncDemo unsync_termination_demo(const Protocol& pi, const Bits& x,
                                   const Bits& y, int gap);

}  // namespace erasim
