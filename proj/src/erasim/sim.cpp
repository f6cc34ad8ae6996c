#include "erasim/sim.hpp"

#include <algorithm>
#include <cstdlib>

#include "erasim/error.hpp"
#include "erasim/scheme_ags.hpp"
#include "erasim/scheme_fixed.hpp"
#include "erasim/unary.hpp"

namespace erasim {

int64_t default_max_rounds(int n, int64_t noise_budget) {
  return 4 * (static_cast<int64_t>(n) + 4 * noise_budget) + 16;
}

namespace {

char sent_slot_char(SchemeId scheme, WireSlot s) {
  if (scheme == SchemeId::ags1)
    return s == WireSlot::energy ? '1' : '0';
  switch (s) {
    case WireSlot::bit0: return '0';
    case WireSlot::bit1: return '1';
    case WireSlot::silent: return '_';
    case WireSlot::energy: return '1';
  }
  fail(Errc::internal, "bad wire slot");
}

std::vector<WireSlot> encode_token(SchemeId scheme, const ChannelToken& tok) {
  switch (scheme) {
    case SchemeId::basic2: return fixed::encode_binary2(tok);
    case SchemeId::ecc3: return fixed::encode_ecc3(tok);
    case SchemeId::ags1: return encode_unary_block(tok);
    default: fail(Errc::internal, "encode_token: not a layered scheme");
  }
}

ChannelToken decode_token(SchemeId scheme, const std::vector<RecvSlot>& slots) {
  switch (scheme) {
    case SchemeId::basic2: return fixed::decode_binary2(slots);
    case SchemeId::ecc3: return fixed::decode_ecc3(slots);
    case SchemeId::ags1: return decode_unary_block(slots);
    default: fail(Errc::internal, "decode_token: not a layered scheme");
  }
}

// Per-run channel front end: applies noise slot by slot and keeps the
// plaintext history online adversaries are entitled to see.
class Channel {
 public:
  Channel(SchemeId scheme, NoiseSource* noise)
      : scheme_(scheme), slots_(slots_per_token(scheme)), noise_(noise) {}

  struct Delivery {
    ChannelToken received;
    std::string wire_sent;
    std::string wire_recv;
    int erased_slots = 0;
  };

  Delivery send(int timestep, int round, Role sender, bool injected,
                const ChannelToken& token, bool live) {
    Delivery d;
    history_.push_back({wire_timestep_ + 1, sender, token, injected});
    if (slots_ == 1) {
      bool erase = live && decide(timestep, round, sender, injected, token, 0);
      d.received = transmit(token, erase);
      d.erased_slots = erase ? 1 : 0;
      return d;
    }
    std::vector<WireSlot> sent = encode_token(scheme_, token);
    std::vector<RecvSlot> recv(sent.size());
    for (size_t j = 0; j < sent.size(); ++j) {
      bool erase = live && decide(timestep, round, sender, injected, token,
                                  static_cast<int>(j));
      recv[j] = {erase, sent[j]};
      d.wire_sent.push_back(sent_slot_char(scheme_, sent[j]));
      d.wire_recv.push_back(erase ? 'x' : sent_slot_char(scheme_, sent[j]));
      if (erase) ++d.erased_slots;
    }
    d.received = decode_token(scheme_, recv);
    return d;
  }

  int64_t wire_timesteps() const { return wire_timestep_; }

 private:
  bool decide(int timestep, int round, Role sender, bool injected,
              const ChannelToken& token, int slot_index) {
    ++wire_timestep_;
    if (!noise_) return false;
    NoiseContext ctx;
    ctx.wire_timestep = wire_timestep_;
    ctx.token_timestep = timestep;
    ctx.round = round;
    ctx.slot_index = slot_index;
    ctx.slots_per_token = slots_;
    ctx.sender = sender;
    ctx.sender_injected = injected;
    ctx.token = token;
    ctx.history = &history_;
    return noise_->decide(ctx);
  }

  SchemeId scheme_;
  int slots_;
  NoiseSource* noise_;
  int64_t wire_timestep_ = 0;
  std::vector<SentEvent> history_;
};

struct Parties {
  fixed::AliceState fa;
  fixed::BobState fb;
  ags::AliceState aa;
  ags::BobState ab;
};

PartySnapshot snap_alice(const Parties& p, bool ags_family) {
  PartySnapshot s;
  if (ags_family) {
    s.round = p.aa.round;
    s.transcript = p.aa.transcript;
    s.terminated = p.aa.terminated;
    s.last_received = p.aa.last_received;
  } else {
    s.round = p.fa.round;
    s.transcript = p.fa.transcript;
    s.terminated = p.fa.terminated;
  }
  return s;
}

PartySnapshot snap_bob(const Parties& p, bool ags_family) {
  PartySnapshot s;
  if (ags_family) {
    s.round = p.ab.round;
    s.transcript = p.ab.transcript;
    s.termination_phase = p.ab.phase == ags::BobPhase::termination ? 1 : 0;
    s.last_received = p.ab.last_received;
  } else {
    s.round = p.fb.round;
    s.transcript = p.fb.transcript;
    s.terminated = p.fb.terminated;
    s.err = p.fb.err;
  }
  return s;
}

}  // namespace

RunResult run(const RunConfig& config) {
  if (!config.protocol) fail(Errc::usage, "run: no protocol given");
  const Protocol& pi = *config.protocol;
  if (!pi.normalized())
    fail(Errc::usage, "run: protocol must be normalized (alternating, even "
                      "length, nonempty)");
  check_inputs(pi, config.x, config.y);
  const bool ags_family = is_ags(config.scheme);
  const int settle = std::max(1, config.settle_rounds);
  if (config.noise) config.noise->reset();
  const int64_t budget = config.noise ? config.noise->budget() : 0;
  const int64_t cap = config.max_rounds > 0
                          ? config.max_rounds
                          : default_max_rounds(pi.length(), budget);
  if (cap < pi.half_rounds())
    fail(Errc::usage, "run: max_rounds below the noise-free round count");

  RunResult res;
  RunTrace& trace = res.trace;
  trace.scheme = config.scheme;
  trace.n = pi.length();
  trace.x = config.x;
  trace.y = config.y;
  trace.reference = reference_transcript(pi, config.x, config.y);
  trace.settle_rounds = ags_family ? settle : 0;
  trace.noise_spec = config.noise ? config.noise->spec() : "none";
  trace.max_rounds = cap;

  Channel channel(config.scheme, config.noise);
  Parties p;
  CostSnapshot costs;
  Metrics& m = res.metrics;
  bool settling = false;
  int settle_left = 0;
  bool settle_all_silent = true;
  int64_t live_wire_timesteps = 0;
  int64_t live_erasures = 0;

  auto record = [&](int timestep, int round, Role sender, bool injected,
                    const ChannelToken& sent, const Channel::Delivery& d) {
    if (!config.collect_trace) return;
    StepRecord s;
    s.timestep = timestep;
    s.round = round;
    s.settle = settling;
    s.sender = sender;
    s.sent = sent;
    s.injected = injected;
    s.wire_sent = d.wire_sent;
    s.wire_recv = d.wire_recv;
    s.erased_slots = d.erased_slots;
    s.received = d.received;
    s.alice = snap_alice(p, ags_family);
    s.bob = snap_bob(p, ags_family);
    s.costs = costs;
    trace.steps.push_back(std::move(s));
  };

  for (int round = 1;; ++round) {
    if (round > cap) {
      res.aborted = true;
      res.abort_reason = "safety cap of " + std::to_string(cap) +
                         " rounds exceeded; misbehaving noise source?";
      break;
    }
    const bool live = !settling;

    // Odd timestep: Alice's side of the round.
    const int t_odd = 2 * round - 1;
    ChannelToken token_a;
    bool injected_a = false;
    const bool alice_done =
        ags_family ? p.aa.terminated : p.fa.terminated;
    if (!alice_done) {
      if (ags_family) {
        auto [ns, tok] = ags::alice_odd(p.aa, pi, config.x);
        p.aa = ns;
        token_a = tok;
      } else {
        auto [ns, tok] = fixed::alice_odd(p.fa, pi, config.x);
        p.fa = ns;
        token_a = tok;
      }
    } else {
      token_a = ChannelToken::silence();
      injected_a = true;
    }
    Channel::Delivery da =
        channel.send(t_odd, round, Role::alice, injected_a, token_a, live);
    if (!injected_a && token_a.is_symbol()) ++costs.alice_sent;
    if (da.received.is_erasure()) ++costs.erasures_received;
    if (live) {
      live_wire_timesteps += slots_per_token(config.scheme);
      live_erasures += da.erased_slots;
    }
    if (settling && (token_a.is_symbol() || da.received.is_symbol()))
      settle_all_silent = false;

    bool bob_terminated_now = false;
    if (ags_family) {
      int phase_before = p.ab.phase == ags::BobPhase::termination ? 1 : 0;
      p.ab = ags::bob_odd(p.ab, da.received, pi, config.y);
      (void)phase_before;
    } else {
      p.fb = fixed::bob_odd(p.fb, da.received);
      bob_terminated_now = p.fb.terminated;
    }
    record(t_odd, round, Role::alice, injected_a, token_a, da);

    if (bob_terminated_now) {
      // Bob quits on hearing silence and sends nothing this round.
      trace.bob_terminated_round = round;
      m.t_b = round;
      break;
    }

    // Even timestep: Bob's side of the round.
    const int t_even = 2 * round;
    ChannelToken token_b;
    if (ags_family) {
      bool was_simulating = p.ab.phase == ags::BobPhase::simulating;
      auto [ns, tok] = ags::bob_even(p.ab, pi);
      bool now_termination = ns.phase == ags::BobPhase::termination;
      if (was_simulating && now_termination && trace.bob_phase_switch_round == 0)
        trace.bob_phase_switch_round = round;
      p.ab = ns;
      token_b = tok;
    } else {
      auto [ns, tok] = fixed::bob_even(p.fb, pi, config.y);
      p.fb = ns;
      token_b = tok;
    }
    Channel::Delivery db =
        channel.send(t_even, round, Role::bob, false, token_b, live);
    if (token_b.is_symbol()) ++costs.bob_sent;
    if (settling && (token_b.is_symbol() || db.received.is_symbol()))
      settle_all_silent = false;

    const bool alice_listening =
        !(ags_family ? p.aa.terminated : p.fa.terminated);
    if (alice_listening) {
      if (db.received.is_erasure()) ++costs.erasures_received;
      if (ags_family) {
        p.aa = ags::alice_even(p.aa, db.received, pi, config.x);
        if (p.aa.terminated) trace.alice_terminated_round = round;
      } else {
        p.fa = fixed::alice_even(p.fa, db.received, pi);
        if (p.fa.terminated) trace.alice_terminated_round = round;
      }
    }
    if (live) {
      live_wire_timesteps += slots_per_token(config.scheme);
      live_erasures += db.erased_slots;
    }
    record(t_even, round, Role::bob, false, token_b, db);

    if (ags_family && !settling &&
        (ags_family ? p.aa.terminated : false)) {
      // Semi-termination reached; certify it with noise-free rounds.
      settling = true;
      settle_left = settle;
      m.t_a = trace.alice_terminated_round;
      continue;
    }
    if (settling && --settle_left == 0) break;
  }

  if (!res.aborted) {
    if (ags_family) {
      trace.semi_terminated = settle_all_silent;
      m.semi_termination = settle_all_silent;
      m.t_b = trace.alice_terminated_round;  // semi-termination round
      m.rounds_total = trace.alice_terminated_round + settle;
      m.rc_timesteps =
          static_cast<int64_t>(2) * trace.alice_terminated_round *
          slots_per_token(config.scheme);
    } else {
      m.t_a = trace.alice_terminated_round;
      m.rounds_total = trace.bob_terminated_round;
      m.rc_timesteps = static_cast<int64_t>(2) * trace.bob_terminated_round - 1;
      m.rc_timesteps *= slots_per_token(config.scheme);
    }
  } else {
    m.t_a = trace.alice_terminated_round;
    m.t_b = trace.bob_terminated_round;
    m.rounds_total = static_cast<int>(std::min<int64_t>(cap, INT32_MAX));
  }
  m.t_a = trace.alice_terminated_round;
  m.transmissions = costs.alice_sent + costs.bob_sent;
  m.cc_sym = m.transmissions;
  m.cc_bits = m.transmissions * bits_per_symbol(config.scheme);
  m.erasures_counted = live_erasures;
  m.erasure_marks = costs.erasures_received;

  res.output_a = ags_family ? p.aa.transcript : p.fa.transcript;
  res.output_b = ags_family ? p.ab.transcript : p.fb.transcript;
  trace.output_a = res.output_a;
  trace.output_b = res.output_b;
  trace.aborted = res.aborted;
  trace.abort_reason = res.abort_reason;
  trace.metrics = m;
  return res;
}

int64_t count_patterns(int64_t horizon, int budget) {
  int64_t total = 0;
  for (int b = 0; b <= budget; ++b) {
    // binomial(horizon, b), saturating
    long double c = 1;
    for (int i = 0; i < b; ++i) c = c * static_cast<long double>(horizon - i) / (i + 1);
    if (c > 4e18L) return INT64_MAX;
    total += static_cast<int64_t>(c + 0.5L);
    if (total < 0) return INT64_MAX;
  }
  return total;
}

SearchResult exhaustive_noise_search(SchemeId scheme, const Protocol& pi,
                                     const Bits& x, const Bits& y, int budget,
                                     int64_t horizon, int settle_rounds,
                                     int64_t max_patterns,
                                     const SearchObserver& per_run) {
  if (budget < 0 || horizon < 0)
    fail(Errc::usage, "exhaustive search: budget and horizon must be >= 0");
  if (max_patterns <= 0) {
    max_patterns = 5'000'000;
    if (const char* env = std::getenv("ERASURESIM_MAX_PATTERNS")) {
      try {
        max_patterns = std::stoll(env);
      } catch (const std::exception&) {
        fail(Errc::usage, "ERASURESIM_MAX_PATTERNS is not an integer");
      }
    }
  }
  const int64_t total = count_patterns(horizon, budget);
  if (total > max_patterns)
    fail(Errc::limit,
         "exhaustive search needs " + std::to_string(total) +
             " patterns; limit is " + std::to_string(max_patterns) +
             " (raise ERASURESIM_MAX_PATTERNS to allow)");

  const Bits expected = reference_transcript(pi, x, y);
  SearchResult res;

  auto try_pattern = [&](const std::vector<int64_t>& ts) {
    NoisePattern pattern = NoisePattern::from_list(ts);
    auto noise = make_pattern_noise(pattern);
    RunConfig cfg;
    cfg.scheme = scheme;
    cfg.protocol = &pi;
    cfg.x = x;
    cfg.y = y;
    cfg.noise = noise.get();
    cfg.settle_rounds = settle_rounds;
    cfg.collect_trace = false;
    RunResult r = run(cfg);
    ++res.patterns_tried;
    if (r.aborted || r.output_a != expected || r.output_b != expected ||
        (is_ags(scheme) && !r.metrics.semi_termination))
      res.all_outputs_correct = false;
    if (r.metrics.transmissions > res.worst_transmissions) {
      res.worst_transmissions = r.metrics.transmissions;
      res.worst_erasures_counted = r.metrics.erasures_counted;
      res.worst_pattern = pattern;
    }
    res.worst_cc_bits = std::max(res.worst_cc_bits, r.metrics.cc_bits);
    res.worst_rc_timesteps =
        std::max(res.worst_rc_timesteps, r.metrics.rc_timesteps);
    res.worst_t_b = std::max(res.worst_t_b, r.metrics.t_b);
    if (per_run) per_run(pattern, r);
  };

  std::vector<int64_t> ts;
  try_pattern(ts);
  for (int b = 1; b <= budget && b <= horizon; ++b) {
    // lexicographic combinations of size b from 1..horizon
    std::vector<int64_t> idx(static_cast<size_t>(b));
    for (int i = 0; i < b; ++i) idx[static_cast<size_t>(i)] = i + 1;
    while (true) {
      try_pattern(idx);
      int k = b - 1;
      while (k >= 0 && idx[static_cast<size_t>(k)] == horizon - (b - 1 - k)) --k;
      if (k < 0) break;
      ++idx[static_cast<size_t>(k)];
      for (int j = k + 1; j < b; ++j)
        idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
  }
  return res;
}

UnsyncDemo unsync_termination_demo(const Protocol& pi, const Bits& x,
                                   const Bits& y, int gap) {
  if (gap < 1) fail(Errc::usage, "unsync demo: gap must be >= 1");
  RunConfig base;
  base.scheme = SchemeId::basic4;
  base.protocol = &pi;
  base.x = x;
  base.y = y;
  base.collect_trace = false;
  RunResult clean = run(base);
  const int t_a = clean.metrics.t_a;

  UnsyncDemo demo;
  // Erase the silence Bob hears in the gap-1 rounds after Alice exits;
  // these erasures cannot move Alice's exit round.
  for (int j = 1; j <= gap - 1; ++j)
    demo.pattern.erased.insert(2 * static_cast<int64_t>(t_a + j) - 1);
  auto noise = make_pattern_noise(demo.pattern);
  RunConfig cfg = base;
  cfg.noise = noise.get();
  cfg.collect_trace = true;
  demo.result = run(cfg);
  demo.gap = demo.result.metrics.t_b - demo.result.metrics.t_a;
  demo.erasures = demo.result.metrics.erasures_counted;
  if (demo.gap != gap)
    fail(Errc::internal, "unsync demo: achieved gap " +
                             std::to_string(demo.gap) + " instead of " +
                             std::to_string(gap));
  return demo;
}

}  // namespace erasim
