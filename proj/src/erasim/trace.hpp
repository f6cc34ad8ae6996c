#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "erasim/channel.hpp"
#include "erasim/protocol.hpp"

namespace erasim {

enum class SchemeId : uint8_t { basic4, basic2, ecc3, ags4, ags1 };

SchemeId parse_scheme(const std::string& name);
const char* scheme_name(SchemeId s);
// AGS-family schemes allow silence during the run and end in
// semi-termination; basic-family schemes require a symbol in every owned
// timestep and terminate both parties.
bool is_ags(SchemeId s);
int slots_per_token(SchemeId s);
// Bits on the wire per non-silent symbol, used for communication-in-bits
// metrics (the unary scheme pays one energy pulse per symbol).
int bits_per_symbol(SchemeId s);

struct PartySnapshot {
  int round = 0;
  Bits transcript;
  bool terminated = false;
  bool err = false;                      // fixed-scheme Bob
  int termination_phase = 0;             // AGS Bob: 1 once in termination phase
  ChannelToken last_received = ChannelToken::symbol(0, 0);  // AGS
};

// Cumulative counters at the end of a step: non-silent sends per party and
// erasure marks delivered to a listening party.
struct CostSnapshot {
  int64_t alice_sent = 0;
  int64_t bob_sent = 0;
  int64_t erasures_received = 0;
};

struct StepRecord {
  int timestep = 0;  // 4-ary timestep, 1-based
  int round = 0;
  bool settle = false;  // noise-free settle round after semi-termination
  Role sender = Role::alice;
  ChannelToken sent;
  bool injected = false;  // harness-materialized silence of a terminated party
  // Layered schemes only: one character per wire slot. Sent slots use
  // '0'/'1' for bits ('1' is energy in the unary scheme, where '0' means
  // silent) and '_' for silent binary/ECC slots; received slots replace
  // erased positions with 'x'.
  std::string wire_sent;
  std::string wire_recv;
  int erased_slots = 0;  // channel erasures applied within this timestep
  ChannelToken received;
  PartySnapshot alice;  // post-step
  PartySnapshot bob;    // post-step
  CostSnapshot costs;   // post-step
};

struct Metrics {
  int t_a = 0;  // Alice's termination round
  int t_b = 0;  // Bob's termination round; for AGS the semi-termination round
  bool semi_termination = false;
  int64_t transmissions = 0;  // symbols sent by the parties
  int64_t cc_sym = 0;         // same counting; kept under both names
  int64_t cc_bits = 0;
  int64_t rc_timesteps = 0;  // wire timesteps until (semi-)termination
  int rounds_total = 0;      // rounds recorded, settle included
  int64_t erasures_counted = 0;  // wire erasures applied in the live window
  int64_t erasure_marks = 0;     // erasure marks delivered to a listener
};

struct RunTrace {
  SchemeId scheme = SchemeId::basic4;
  int n = 0;
  Bits x, y;
  Bits reference;  // noise-free transcript both parties must output
  int settle_rounds = 0;
  std::string noise_spec;
  int64_t max_rounds = 0;

  std::vector<StepRecord> steps;

  Bits output_a, output_b;
  int alice_terminated_round = 0;   // 0 = never happened
  int bob_terminated_round = 0;     // basic family only
  int bob_phase_switch_round = 0;   // AGS: round whose end entered termination phase
  bool semi_terminated = false;     // AGS: settle rounds were all-silent
  bool aborted = false;             // safety cap hit; partial trace
  std::string abort_reason;

  Metrics metrics;
};

std::string trace_to_jsonl(const RunTrace& trace);
RunTrace trace_from_jsonl(const std::string& text);
void write_trace_file(const RunTrace& trace, const std::string& path);
RunTrace read_trace_file(const std::string& path);

std::string metrics_to_json(const Metrics& m);

// Erasures applied within the live window of a completed trace; erasures a
// pattern schedules after the run has ended never happen and are not
// counted.
int64_t noise_used(const RunTrace& trace);

}  // namespace erasim
