#include "erasim/sim.hpp"

#include <random>

#include "doctest.h"
#include "erasim/error.hpp"
#include "erasim/verify.hpp"

using namespace erasim;

namespace {

RunResult run_with(SchemeId scheme, const Protocol& pi, const Bits& x,
                   const Bits& y, const std::vector<int64_t>& erase,
                   bool trace = true) {
  auto noise = make_pattern_noise(NoisePattern::from_list(erase));
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.protocol = &pi;
  cfg.x = x;
  cfg.y = y;
  cfg.noise = noise.get();
  cfg.collect_trace = trace;
  return run(cfg);
}

}  // namespace

TEST_CASE("noise-free basic4 run on string exchange") {
  Protocol pi = Protocol::string_exchange(4);
  RunResult r = run_with(SchemeId::basic4, pi, "10", "01", {});
  CHECK(r.output_a == "1001");
  CHECK(r.output_b == "1001");
  CHECK(r.metrics.transmissions == 4);
  CHECK(r.metrics.t_a == 2);
  CHECK(r.metrics.t_b == 3);
  CHECK(r.metrics.erasures_counted == 0);
  CHECK(r.metrics.cc_bits == 8);
  CHECK(r.metrics.rc_timesteps == 5);  // 2 t_B - 1
}

TEST_CASE("basic4 with one erased response pays one extra round") {
  Protocol pi = Protocol::string_exchange(4);
  RunResult r = run_with(SchemeId::basic4, pi, "10", "01", {2});
  CHECK(r.output_a == "1001");
  CHECK(r.output_b == "1001");
  CHECK(r.metrics.erasures_counted == 1);
  CHECK(r.metrics.transmissions == 6);  // N + 2T
}

TEST_CASE("ags4 with one erased challenge stays within one extra symbol") {
  Protocol pi = Protocol::string_exchange(4);
  RunResult r = run_with(SchemeId::ags4, pi, "10", "01", {3});
  CHECK(r.output_a == "1001");
  CHECK(r.output_b == "1001");
  CHECK(r.metrics.erasures_counted == 1);
  CHECK(r.metrics.cc_sym == 5);  // N + T
  CHECK(r.metrics.semi_termination);
  CHECK(r.metrics.t_a == 3);
}

TEST_CASE("every scheme simulates every small input pair without noise") {
  Protocol pi = Protocol::string_exchange(6);
  for (SchemeId scheme : {SchemeId::basic4, SchemeId::basic2, SchemeId::ecc3,
                          SchemeId::ags4, SchemeId::ags1}) {
    for (int xi = 0; xi < 8; ++xi) {
      for (int yi = 0; yi < 8; ++yi) {
        Bits x, y;
        for (int b = 2; b >= 0; --b) {
          x.push_back((xi >> b & 1) ? '1' : '0');
          y.push_back((yi >> b & 1) ? '1' : '0');
        }
        RunResult r = run_with(scheme, pi, x, y, {}, false);
        Bits expect = reference_transcript(pi, x, y);
        REQUIRE(r.output_a == expect);
        REQUIRE(r.output_b == expect);
        REQUIRE(r.metrics.transmissions == 6);
      }
    }
  }
}

TEST_CASE("identical configurations produce byte-identical traces") {
  Protocol pi = Protocol::string_exchange(6);
  auto once = [&] {
    RunResult r =
        run_with(SchemeId::ags1, pi, "101", "110", {3, 7, 12, 20});
    return trace_to_jsonl(r.trace);
  };
  CHECK(once() == once());
}

TEST_CASE("trace JSONL round-trips") {
  Protocol pi = Protocol::string_exchange(4);
  RunResult r = run_with(SchemeId::basic2, pi, "10", "01", {2, 5});
  RunTrace back = trace_from_jsonl(trace_to_jsonl(r.trace));
  CHECK(trace_to_jsonl(back) == trace_to_jsonl(r.trace));
}

TEST_CASE("a static pattern and the equivalent online adversary agree") {
  // Online adversaries and fixed patterns are interchangeable against a
  // deterministic scheme.
  struct SetAdversary : NoiseSource {
    std::set<int64_t> ts;
    bool decide(const NoiseContext& ctx) override {
      return ts.count(ctx.wire_timestep) != 0;
    }
    int64_t budget() const override { return static_cast<int64_t>(ts.size()); }
    std::string spec() const override { return "list:2,5,9"; }
  };
  Protocol pi = Protocol::string_exchange(6);
  SetAdversary adv;
  adv.ts = {2, 5, 9};
  RunConfig cfg;
  cfg.scheme = SchemeId::basic4;
  cfg.protocol = &pi;
  cfg.x = "101";
  cfg.y = "110";
  cfg.noise = &adv;
  RunResult a = run(cfg);
  RunResult b = run_with(SchemeId::basic4, pi, "101", "110", {2, 5, 9});
  CHECK(trace_to_jsonl(a.trace) == trace_to_jsonl(b.trace));
}

TEST_CASE("noise_used counts only erasures the run could see") {
  Protocol pi = Protocol::string_exchange(4);
  RunResult clean = run_with(SchemeId::basic4, pi, "10", "01", {});
  CHECK(noise_used(clean.trace) == 0);
  RunResult one = run_with(SchemeId::basic4, pi, "10", "01", {2});
  CHECK(noise_used(one.trace) == 1);
  // run ends at timestep 2 t_B - 1 = 5; a later erasure never happens
  RunResult late = run_with(SchemeId::basic4, pi, "10", "01", {400});
  CHECK(noise_used(late.trace) == 0);
  CHECK(late.metrics.erasures_counted == 0);
  CHECK(late.metrics.t_b == 3);
}

TEST_CASE("exhaustive search: noise-free baseline") {
  Protocol pi = Protocol::string_exchange(4);
  SearchResult s = exhaustive_noise_search(SchemeId::basic4, pi, "10", "01",
                                           0, 8);
  CHECK(s.patterns_tried == 1);
  CHECK(s.all_outputs_correct);
  CHECK(s.worst_transmissions == 4);
}

TEST_CASE("exhaustive search: basic4 worst case matches the bound exactly") {
  Protocol pi = Protocol::string_exchange(4);
  SearchResult s = exhaustive_noise_search(SchemeId::basic4, pi, "10", "01",
                                           2, 12);
  CHECK(s.all_outputs_correct);
  CHECK(s.worst_transmissions == 8);  // N + 2T with both erasures spent
}

TEST_CASE("exhaustive search: ags4 worst case matches the bound exactly") {
  Protocol pi = Protocol::string_exchange(4);
  SearchResult s = exhaustive_noise_search(SchemeId::ags4, pi, "10", "01",
                                           2, 16);
  CHECK(s.all_outputs_correct);
  CHECK(s.worst_transmissions == 6);  // N + T
}

TEST_CASE("exhaustive search refuses oversized enumerations") {
  Protocol pi = Protocol::string_exchange(4);
  CHECK_THROWS_AS(exhaustive_noise_search(SchemeId::basic4, pi, "10", "01", 3,
                                          60, 3, 1000),
                  Error);
}

TEST_CASE("greedy adversary is worst-case on small instances") {
  // The sweep trusts the greedy adversary at scale; validate it against
  // the brute-force oracle here.
  for (int n : {4, 6}) {
    Protocol pi = Protocol::string_exchange(n);
    Bits x, y;
    for (int i = 0; i < n / 2; ++i) {
      x.push_back(i % 2 ? '0' : '1');
      y.push_back(i % 2 ? '1' : '0');
    }
    for (int budget = 0; budget <= 3; ++budget) {
      SearchResult s = exhaustive_noise_search(SchemeId::basic4, pi, x, y,
                                               budget, 4 * n);
      auto greedy = make_greedy_adversary(budget);
      RunConfig cfg;
      cfg.scheme = SchemeId::basic4;
      cfg.protocol = &pi;
      cfg.x = x;
      cfg.y = y;
      cfg.noise = greedy.get();
      cfg.collect_trace = false;
      RunResult g = run(cfg);
      CHECK(g.metrics.transmissions == s.worst_transmissions);
      CHECK(g.metrics.transmissions == n + 2 * budget);

      SearchResult sa = exhaustive_noise_search(SchemeId::ags4, pi, x, y,
                                                budget, 4 * n);
      cfg.scheme = SchemeId::ags4;
      greedy->reset();
      RunResult ga = run(cfg);
      CHECK(ga.metrics.cc_sym == sa.worst_transmissions);
      CHECK(ga.metrics.cc_sym == n + budget);
    }
  }
}

TEST_CASE("unsynchronized termination demonstrator") {
  Protocol pi = Protocol::string_exchange(4);
  for (int gap : {1, 3, 10}) {
    UnsyncDemo d = unsync_termination_demo(pi, "10", "01", gap);
    CHECK(d.gap == gap);
    CHECK(d.erasures == gap - 1);
    CHECK(static_cast<int>(d.pattern.erased.size()) == gap - 1);
    CHECK(d.result.output_b == "1001");
    CHECK(d.result.metrics.t_b - d.result.metrics.t_a == gap);
  }
  CHECK_THROWS_AS(unsync_termination_demo(pi, "10", "01", 0), Error);
}

TEST_CASE("two-bit layering: slot erasures induce the 4-ary run exactly") {
  Protocol pi = Protocol::string_exchange(6);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int64_t> slot_pattern;
    std::set<int64_t> token_pattern;
    for (int64_t s = 1; s <= 40; ++s) {
      if (rng() % 5 == 0) {
        slot_pattern.push_back(s);
        token_pattern.insert((s + 1) / 2);
      }
    }
    RunResult two = run_with(SchemeId::basic2, pi, "101", "110", slot_pattern);
    RunResult four = run_with(
        SchemeId::basic4, pi, "101", "110",
        std::vector<int64_t>(token_pattern.begin(), token_pattern.end()));
    CHECK(two.output_a == four.output_a);
    CHECK(two.output_b == four.output_b);
    CHECK(two.metrics.t_a == four.metrics.t_a);
    CHECK(two.metrics.t_b == four.metrics.t_b);
    CHECK(two.metrics.transmissions == four.metrics.transmissions);
    REQUIRE(two.trace.steps.size() == four.trace.steps.size());
    for (size_t i = 0; i < two.trace.steps.size(); ++i) {
      CHECK(two.trace.steps[i].sent == four.trace.steps[i].sent);
      CHECK(two.trace.steps[i].received == four.trace.steps[i].received);
    }
  }
}

TEST_CASE("ECC layering: the induced 4-ary erasures are the failed decodes") {
  Protocol pi = Protocol::string_exchange(6);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int64_t> slot_pattern;
    for (int64_t s = 1; s <= 60; ++s)
      if (rng() % 4 == 0) slot_pattern.push_back(s);
    RunResult ecc = run_with(SchemeId::ecc3, pi, "101", "110", slot_pattern);
    std::vector<int64_t> induced;
    for (const StepRecord& s : ecc.trace.steps)
      if (s.received.is_erasure()) induced.push_back(s.timestep);
    RunResult four = run_with(SchemeId::basic4, pi, "101", "110", induced);
    CHECK(ecc.output_a == four.output_a);
    CHECK(ecc.output_b == four.output_b);
    CHECK(ecc.metrics.transmissions == four.metrics.transmissions);
    CHECK(ecc.metrics.t_b == four.metrics.t_b);
    // single slot erasures are corrected, so marks can be fewer than slots
    CHECK(static_cast<int64_t>(induced.size()) <= ecc.metrics.erasures_counted);
  }
}

TEST_CASE("unary layering: block-decoding reproduces the 4-ary AGS run") {
  Protocol pi = Protocol::string_exchange(6);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int64_t> slot_pattern;
    std::set<int64_t> block_pattern;
    for (int64_t s = 1; s <= 80; ++s) {
      if (rng() % 6 == 0) {
        slot_pattern.push_back(s);
        block_pattern.insert((s - 1) / 4 + 1);
      }
    }
    RunResult unary = run_with(SchemeId::ags1, pi, "101", "110", slot_pattern);
    RunResult four = run_with(
        SchemeId::ags4, pi, "101", "110",
        std::vector<int64_t>(block_pattern.begin(), block_pattern.end()));
    CHECK(unary.output_a == four.output_a);
    CHECK(unary.output_b == four.output_b);
    CHECK(unary.metrics.cc_sym == four.metrics.cc_sym);
    CHECK(unary.metrics.t_a == four.metrics.t_a);
    CHECK(unary.metrics.semi_termination == four.metrics.semi_termination);
    // the induced instance never has more erasures than the unary one
    CHECK(static_cast<int64_t>(block_pattern.size()) <=
          static_cast<int64_t>(slot_pattern.size()));
    REQUIRE(unary.trace.steps.size() == four.trace.steps.size());
    for (size_t i = 0; i < unary.trace.steps.size(); ++i) {
      CHECK(unary.trace.steps[i].sent == four.trace.steps[i].sent);
      CHECK(unary.trace.steps[i].received == four.trace.steps[i].received);
    }
  }
}

TEST_CASE("a misbehaving noise source hits the safety cap, never fake output") {
  struct Liar : NoiseSource {
    bool decide(const NoiseContext& ctx) override {
      return ctx.sender == Role::alice;  // erases forever
    }
    int64_t budget() const override { return 1; }  // claims to be finite
    std::string spec() const override { return "liar"; }
  };
  Protocol pi = Protocol::string_exchange(4);
  Liar liar;
  RunConfig cfg;
  cfg.scheme = SchemeId::basic4;
  cfg.protocol = &pi;
  cfg.x = "10";
  cfg.y = "01";
  cfg.noise = &liar;
  RunResult r = run(cfg);
  CHECK(r.aborted);
  CHECK(!r.abort_reason.empty());
  VerifyReport report = verify_trace(r.trace);
  CHECK(!report.ok());
  CHECK(!report.find("run-completed")->pass);
}

TEST_CASE("run rejects unusable configurations") {
  Protocol pi = Protocol::string_exchange(4);
  RunConfig cfg;
  cfg.protocol = nullptr;
  CHECK_THROWS_AS(run(cfg), Error);
  cfg.protocol = &pi;
  cfg.x = "10";
  cfg.y = "01";
  cfg.max_rounds = 1;  // below N/2
  CHECK_THROWS_AS(run(cfg), Error);
}
