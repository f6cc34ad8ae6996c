#include "erasim/verify.hpp"

#include <algorithm>
#include <sstream>

#include "erasim/error.hpp"
#include "json.hpp"

namespace erasim {

bool VerifyReport::ok() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

const CheckResult* VerifyReport::find(const std::string& id) const {
  for (const CheckResult& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string VerifyReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json j;
    j["id"] = c.id;
    j["description"] = c.description;
    j["pass"] = c.pass;
    if (!c.pass) {
      j["first_violation_round"] = c.first_violation_round;
      j["detail"] = c.detail;
    }
    arr.push_back(j);
  }
  nlohmann::json out;
  out["ok"] = ok();
  out["checks"] = arr;
  return out.dump();
}

std::string VerifyReport::to_text() const {
  std::ostringstream out;
  for (const CheckResult& c : checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.id;
    if (!c.pass) {
      out << " (round " << c.first_violation_round << "): " << c.detail;
    }
    out << "\n";
  }
  out << (ok() ? "OK" : "FAILED") << "\n";
  return out.str();
}

namespace {

struct Boundary {
  PartySnapshot alice;
  PartySnapshot bob;
  CostSnapshot costs;
};

// Everything the checks consume, indexed by round.
struct View {
  const RunTrace& trace;
  int n;
  int half;
  std::vector<Boundary> begin;      // begin[i] = state at the start of round i
  int boundaries = 0;               // begin[1..boundaries] are valid
  int rounds = 0;                   // rounds with at least the odd step
  std::vector<int> erased_in_round;       // channel erasures applied, by round
  std::vector<int> marks_in_round;        // erasure marks delivered, by round
  std::vector<ChannelToken> bob_sent;     // by round; silence if absent
  std::vector<bool> round_has_even;
  int t_a;          // 0 = never terminated in this trace
  int active_end;   // last round Alice was active in
};

View build_view(const RunTrace& trace) {
  View v{trace,
         trace.n,
         trace.n / 2,
         {},
         0,
         0,
         {},
         {},
         {},
         {},
         trace.alice_terminated_round,
         0};
  const auto& steps = trace.steps;
  v.rounds = steps.empty() ? 0 : steps.back().round;
  v.begin.assign(static_cast<size_t>(v.rounds) + 2, Boundary{});
  v.erased_in_round.assign(static_cast<size_t>(v.rounds) + 1, 0);
  v.marks_in_round.assign(static_cast<size_t>(v.rounds) + 1, 0);
  v.bob_sent.assign(static_cast<size_t>(v.rounds) + 1, ChannelToken::silence());
  v.round_has_even.assign(static_cast<size_t>(v.rounds) + 1, false);

  Boundary init;
  init.alice.round = 0;
  init.bob.round = 0;
  v.begin[1] = init;
  v.boundaries = 1;
  for (const StepRecord& s : steps) {
    if (s.round >= 1 && s.round <= v.rounds) {
      v.erased_in_round[static_cast<size_t>(s.round)] += s.erased_slots;
      if (s.received.is_erasure()) {
        // Count only marks somebody listened to, matching the cost ledger.
        bool listener_active =
            s.sender == Role::alice || !s.alice.terminated;
        if (listener_active)
          v.marks_in_round[static_cast<size_t>(s.round)] += 1;
      }
      if (s.sender == Role::bob) {
        v.bob_sent[static_cast<size_t>(s.round)] = s.sent;
        v.round_has_even[static_cast<size_t>(s.round)] = true;
      }
    }
    if (s.sender == Role::bob && s.round + 1 <= v.rounds + 1) {
      Boundary b;
      b.alice = s.alice;
      b.bob = s.bob;
      b.costs = s.costs;
      v.begin[static_cast<size_t>(s.round) + 1] = b;
      v.boundaries = std::max(v.boundaries, s.round + 1);
    }
  }
  v.active_end = v.t_a > 0 ? v.t_a : v.rounds;
  return v;
}

bool is_prefix(const Bits& prefix, const Bits& whole) {
  return prefix.size() <= whole.size() &&
         whole.compare(0, prefix.size(), prefix) == 0;
}

class Checker {
 public:
  explicit Checker(const RunTrace& trace) : trace_(trace), v_(build_view(trace)) {}

  VerifyReport report;

  void add(const std::string& id, const std::string& description, bool pass,
           int round = 0, const std::string& detail = "") {
    report.checks.push_back({id, description, pass, pass ? 0 : round,
                             pass ? "" : detail});
  }

  void run_all() {
    check_completed();
    check_structure();
    check_cost_monotone();
    check_state_delta();
    check_transcript_sync();
    if (is_ags(trace_.scheme)) {
      check_post_termination_silence();
      check_progress_two_rounds();
      check_cost_bound();
      check_round_lag();
      check_termination_phase_stall();
      check_bound_rounds();
      check_semi_termination();
    } else {
      check_post_termination_freeze();
      check_noise_free_progress();
    }
    check_output_match();
    check_bound_communication();
  }

 private:
  void check_completed() {
    add("run-completed", "run finished without hitting the safety cap",
        !trace_.aborted, v_.rounds, trace_.abort_reason);
  }

  void check_structure() {
    const auto& steps = trace_.steps;
    for (size_t k = 0; k < steps.size(); ++k) {
      const StepRecord& s = steps[k];
      int round = s.round;
      if (s.timestep != static_cast<int>(k) + 1)
        return add("trace-structure", kStructureDesc, false, round,
                   "timesteps must increase by 1 from 1");
      Role expect = speaker_for_position(s.timestep);
      if (s.sender != expect)
        return add("trace-structure", kStructureDesc, false, round,
                   "exactly one fixed sender per timestep");
      if (s.round != (s.timestep + 1) / 2)
        return add("trace-structure", kStructureDesc, false, round,
                   "round/timestep mismatch");
      if (s.sent.is_erasure())
        return add("trace-structure", kStructureDesc, false, round,
                   "a party transmitted the erasure mark");
      if (!is_ags(trace_.scheme) && !s.injected && s.sent.is_silence())
        return add("trace-structure", kStructureDesc, false, round,
                   "an active party kept silent in the basic setting");
      if (s.injected && !s.sent.is_silence())
        return add("trace-structure", kStructureDesc, false, round,
                   "injected tokens must be silence");
      if (s.received != s.sent && !s.received.is_erasure())
        return add("trace-structure", kStructureDesc, false, round,
                   "the channel altered content instead of erasing");
      size_t slots = static_cast<size_t>(slots_per_token(trace_.scheme));
      if (slots > 1) {
        if (s.wire_sent.size() != slots || s.wire_recv.size() != slots)
          return add("trace-structure", kStructureDesc, false, round,
                     "wire record has the wrong slot count");
        int xs = static_cast<int>(
            std::count(s.wire_recv.begin(), s.wire_recv.end(), 'x'));
        if (xs != s.erased_slots)
          return add("trace-structure", kStructureDesc, false, round,
                     "erased-slot count disagrees with the wire record");
      } else if (s.erased_slots != (s.received.is_erasure() ? 1 : 0)) {
        return add("trace-structure", kStructureDesc, false, round,
                   "erasure flag disagrees with the received token");
      }
    }
    add("trace-structure", kStructureDesc, true);
  }

  void check_cost_monotone() {
    CostSnapshot prev;
    for (const StepRecord& s : trace_.steps) {
      const CostSnapshot& c = s.costs;
      if (c.alice_sent < prev.alice_sent || c.bob_sent < prev.bob_sent ||
          c.erasures_received < prev.erasures_received)
        return add("cost-monotone", kCostMonotoneDesc, false, s.round,
                   "a cost counter decreased");
      if (c.alice_sent > prev.alice_sent + 1 || c.bob_sent > prev.bob_sent + 1)
        return add("cost-monotone", kCostMonotoneDesc, false, s.round,
                   "a party paid more than one send in a timestep");
      if (c.erasures_received > prev.erasures_received + 1)
        return add("cost-monotone", kCostMonotoneDesc, false, s.round,
                   "more than one erasure mark delivered in a timestep");
      bool sent_symbol = !s.injected && s.sent.is_symbol();
      int64_t expect_a = prev.alice_sent, expect_b = prev.bob_sent;
      if (sent_symbol && s.sender == Role::alice) ++expect_a;
      if (sent_symbol && s.sender == Role::bob) ++expect_b;
      if (c.alice_sent != expect_a || c.bob_sent != expect_b)
        return add("cost-monotone", kCostMonotoneDesc, false, s.round,
                   "recorded send costs disagree with the sent tokens");
      prev = c;
    }
    add("cost-monotone", kCostMonotoneDesc, true);
  }

  void check_state_delta() {
    for (int i = 1; i + 1 <= v_.boundaries; ++i) {
      const Boundary& a = v_.begin[static_cast<size_t>(i)];
      const Boundary& b = v_.begin[static_cast<size_t>(i) + 1];
      for (int party = 0; party < 2; ++party) {
        const PartySnapshot& s0 = party == 0 ? a.alice : a.bob;
        const PartySnapshot& s1 = party == 0 ? b.alice : b.bob;
        const char* who = party == 0 ? "Alice" : "Bob";
        if (static_cast<int>(s0.transcript.size()) != 2 * s0.round ||
            static_cast<int>(s1.transcript.size()) != 2 * s1.round)
          return add("state-delta", kStateDeltaDesc, false, i,
                     std::string(who) +
                         ": transcript length is not twice the round count");
        int dr = s1.round - s0.round;
        bool grew = s1.transcript != s0.transcript;
        if (dr != 0 && dr != 1)
          return add("state-delta", kStateDeltaDesc, false, i,
                     std::string(who) + ": round moved by " +
                         std::to_string(dr) + " across one round");
        if ((dr == 1) != grew)
          return add("state-delta", kStateDeltaDesc, false, i,
                     std::string(who) +
                         ": round and transcript must change together");
        if (grew && (!is_prefix(s0.transcript, s1.transcript) ||
                     s1.transcript.size() != s0.transcript.size() + 2))
          return add("state-delta", kStateDeltaDesc, false, i,
                     std::string(who) +
                         ": transcript must grow by exactly the round's two bits");
      }
    }
    add("state-delta", kStateDeltaDesc, true);
  }

  void check_transcript_sync() {
    int last = std::min(v_.active_end + 1, v_.boundaries);
    for (int i = 1; i <= last; ++i) {
      const Boundary& b = v_.begin[static_cast<size_t>(i)];
      const Bits& ta = b.alice.transcript;
      const Bits& tb = b.bob.transcript;
      if (!is_prefix(ta, trace_.reference) || !is_prefix(tb, trace_.reference))
        return add("transcript-sync", kSyncDesc, false, i,
                   "a partial transcript is not a prefix of the reference");
      if (b.bob.round == b.alice.round) {
        if (tb != ta)
          return add("transcript-sync", kSyncDesc, false, i,
                     "equal rounds but unequal transcripts");
      } else if (b.bob.round == b.alice.round + 1) {
        if (tb.size() != ta.size() + 2 || !is_prefix(ta, tb))
          return add("transcript-sync", kSyncDesc, false, i,
                     "Bob one round ahead must hold Alice's transcript plus "
                     "the next two reference bits");
      } else {
        return add("transcript-sync", kSyncDesc, false, i,
                   "round counters out of sync by more than one");
      }
    }
    add("transcript-sync", kSyncDesc, true);
  }

  void check_post_termination_freeze() {
    if (v_.t_a == 0) return add("post-termination-freeze", kFreezeDesc, true);
    int t_b = trace_.bob_terminated_round > 0 ? trace_.bob_terminated_round
                                              : v_.rounds;
    for (int i = v_.t_a + 1; i <= t_b && i <= v_.boundaries; ++i) {
      const Boundary& b = v_.begin[static_cast<size_t>(i)];
      if (b.bob.round != v_.half || b.bob.transcript != trace_.reference ||
          b.alice.round != v_.half)
        return add("post-termination-freeze", kFreezeDesc, false, i,
                   "state changed after Alice's exit");
    }
    add("post-termination-freeze", kFreezeDesc, true);
  }

  void check_noise_free_progress() {
    for (int i = 1; i <= v_.active_end && i + 1 <= v_.boundaries; ++i) {
      if (v_.erased_in_round[static_cast<size_t>(i)] != 0) continue;
      const Boundary& b0 = v_.begin[static_cast<size_t>(i)];
      const Boundary& b1 = v_.begin[static_cast<size_t>(i) + 1];
      if (b1.alice.round != b0.alice.round + 1)
        return add("noise-free-progress", kProgressDesc, false, i,
                   "an erasure-free round did not advance Alice");
    }
    add("noise-free-progress", kProgressDesc, true);
  }

  void check_post_termination_silence() {
    if (v_.t_a == 0)
      return add("post-termination-silence", kSilenceDesc, true);
    for (int i = v_.t_a + 1; i <= v_.rounds; ++i) {
      if (i <= v_.boundaries) {
        const Boundary& b = v_.begin[static_cast<size_t>(i)];
        if (b.alice.round != v_.half || b.bob.round != v_.half)
          return add("post-termination-silence", kSilenceDesc, false, i,
                     "round counters moved after semi-termination");
      }
      if (v_.round_has_even[static_cast<size_t>(i)] &&
          !v_.bob_sent[static_cast<size_t>(i)].is_silence())
        return add("post-termination-silence", kSilenceDesc, false, i,
                   "Bob spoke after semi-termination");
    }
    add("post-termination-silence", kSilenceDesc, true);
  }

  void check_progress_two_rounds() {
    for (int i = 1; i <= v_.active_end && i + 2 <= v_.boundaries; ++i) {
      if (v_.erased_in_round[static_cast<size_t>(i)] != 0 ||
          v_.erased_in_round[static_cast<size_t>(i) + 1] != 0)
        continue;
      const Boundary& b0 = v_.begin[static_cast<size_t>(i)];
      const Boundary& b2 = v_.begin[static_cast<size_t>(i) + 2];
      if (b0.alice.round >= v_.half) continue;
      if (b2.alice.round < b0.alice.round + 1)
        return add("progress-two-rounds", kProgress2Desc, false, i,
                   "two erasure-free rounds did not advance Alice");
    }
    add("progress-two-rounds", kProgress2Desc, true);
  }

  void check_cost_bound() {
    for (int i = 1; i <= v_.boundaries; ++i) {
      const Boundary& b = v_.begin[static_cast<size_t>(i)];
      int64_t lhs = static_cast<int64_t>(b.bob.transcript.size()) +
                    b.costs.erasures_received;
      int64_t rhs = b.costs.alice_sent + b.costs.bob_sent;
      if (b.bob.round == b.alice.round + 1) rhs += 1;
      if (lhs < rhs)
        return add("cost-bound", kCostBoundDesc, false, i,
                   "sends outran Bob's transcript plus the channel cost");
    }
    add("cost-bound", kCostBoundDesc, true);
  }

  void check_round_lag() {
    int switch_round = trace_.bob_phase_switch_round;
    for (int i = 1; i <= v_.boundaries; ++i) {
      bool simulating = switch_round == 0 || i <= switch_round;
      if (!simulating) break;
      const Boundary& b = v_.begin[static_cast<size_t>(i)];
      if (b.alice.round <
          static_cast<int64_t>(i) - 1 - b.costs.erasures_received)
        return add("round-lag", kRoundLagDesc, false, i,
                   "Alice fell behind the round count by more than the "
                   "delivered erasures");
    }
    add("round-lag", kRoundLagDesc, true);
  }

  void check_termination_phase_stall() {
    int switch_round = trace_.bob_phase_switch_round;
    if (switch_round == 0 || v_.t_a == 0)
      return add("termination-phase-stall", kStallDesc, true);
    int s0 = switch_round + 1;
    int stalls = 0;
    int64_t marks = 0;
    if (s0 - 1 >= 1 && s0 - 1 <= v_.rounds)
      marks += v_.marks_in_round[static_cast<size_t>(s0) - 1];
    for (int i = s0; i <= v_.t_a; ++i) {
      if (i + 1 > v_.boundaries) break;
      marks += v_.marks_in_round[static_cast<size_t>(i)];
      const Boundary& b0 = v_.begin[static_cast<size_t>(i)];
      const Boundary& b1 = v_.begin[static_cast<size_t>(i) + 1];
      if (b1.alice.round == b0.alice.round) ++stalls;
      if (stalls > 2 * marks)
        return add("termination-phase-stall", kStallDesc, false, i,
                   "more than two stalled rounds per delivered erasure in "
                   "the termination phase");
    }
    add("termination-phase-stall", kStallDesc, true);
  }

  void check_output_match() {
    bool ok = trace_.output_a == trace_.reference &&
              trace_.output_b == trace_.reference;
    std::string detail;
    if (!ok)
      detail = "outputs (" + trace_.output_a + ", " + trace_.output_b +
               ") differ from the reference " + trace_.reference;
    if (ok && !trace_.steps.empty()) {
      const StepRecord& last = trace_.steps.back();
      if (is_ags(trace_.scheme) &&
          (last.alice.transcript != trace_.reference ||
           last.bob.transcript != trace_.reference)) {
        ok = false;
        detail = "final snapshots disagree with the recorded outputs";
      }
    }
    add("output-match", kOutputDesc, ok, v_.rounds, detail);
  }

  void check_bound_communication() {
    int64_t t = trace_.metrics.erasures_counted;
    int64_t limit = is_ags(trace_.scheme)
                        ? static_cast<int64_t>(v_.n) + t
                        : static_cast<int64_t>(v_.n) + 2 * t;
    bool ok = trace_.metrics.cc_sym <= limit;
    add("bound-communication", kBoundCommDesc, ok, v_.rounds,
        ok ? "" : std::to_string(trace_.metrics.cc_sym) + " symbols > " +
                      std::to_string(limit));
  }

  void check_bound_rounds() {
    if (v_.t_a == 0) {
      // Only an aborted run may lack a termination round; run-completed
      // already reports that case.
      return add("bound-rounds", kBoundRcDesc, trace_.aborted, v_.rounds,
                 "Alice never terminated");
    }
    int64_t t = trace_.metrics.erasures_counted;
    bool ok = 2 * static_cast<int64_t>(v_.t_a) <=
              static_cast<int64_t>(v_.n) + 4 * t;
    add("bound-rounds", kBoundRcDesc, ok, v_.t_a,
        ok ? "" : "semi-termination took more than N + 4T timesteps");
  }

  void check_semi_termination() {
    bool ok = trace_.semi_terminated;
    add("semi-termination", kSemiDesc, ok, v_.t_a,
        ok ? "" : "settle rounds after Alice's exit were not all silent");
  }

  static constexpr const char* kStructureDesc =
      "timesteps are sequential with one fixed sender each and the channel "
      "only erases";
  static constexpr const char* kCostMonotoneDesc =
      "cost counters are consistent and never decrease";
  static constexpr const char* kStateDeltaDesc =
      "per round, each party's (round, transcript) either stays fixed or "
      "grows by one round and its two bits, together";
  static constexpr const char* kSyncDesc =
      "while Alice is active, Bob holds her transcript or one full round "
      "more, and both are prefixes of the reference";
  static constexpr const char* kFreezeDesc =
      "after Alice exits, Bob's state is final until he hears silence";
  static constexpr const char* kProgressDesc =
      "every erasure-free round advances Alice by one round";
  static constexpr const char* kSilenceDesc =
      "after semi-termination both parties stay silent with full transcripts";
  static constexpr const char* kProgress2Desc =
      "two consecutive erasure-free rounds advance Alice at least once";
  static constexpr const char* kCostBoundDesc =
      "sends never exceed Bob's transcript length plus delivered erasures "
      "(plus one when Bob is ahead)";
  static constexpr const char* kRoundLagDesc =
      "before Bob's termination phase, Alice's round trails the round index "
      "by at most the delivered erasures";
  static constexpr const char* kStallDesc =
      "in Bob's termination phase each erasure stalls Alice at most two "
      "rounds";
  static constexpr const char* kOutputDesc =
      "both parties output the reference transcript";
  static constexpr const char* kBoundCommDesc =
      "symbols sent stay within the adaptive communication bound";
  static constexpr const char* kBoundRcDesc =
      "rounds to semi-termination stay within the adaptive round bound";
  static constexpr const char* kSemiDesc =
      "semi-termination was certified by silent settle rounds";

  const RunTrace& trace_;
  View v_;
};

}  // namespace

VerifyReport verify_trace(const RunTrace& trace) {
  Checker checker(trace);
  checker.run_all();
  return checker.report;
}

}  // namespace erasim
