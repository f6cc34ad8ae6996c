#include "erasim/channel.hpp"

#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "erasim/error.hpp"

using namespace erasim;

TEST_CASE("transmit delivers or erases, never substitutes") {
  ChannelToken s10 = ChannelToken::symbol(1, 0);
  CHECK(transmit(s10, false) == s10);
  CHECK(transmit(s10, true) == ChannelToken::erasure());
  CHECK(transmit(ChannelToken::symbol(0, 1), true) == ChannelToken::erasure());
  // silence is corruptible like any other token
  CHECK(transmit(ChannelToken::silence(), true) == ChannelToken::erasure());
  CHECK(transmit(ChannelToken::silence(), false) == ChannelToken::silence());
  CHECK_THROWS(transmit(ChannelToken::erasure(), false));
}

TEST_CASE("token round-trips through its string form") {
  for (ChannelToken t : {ChannelToken::symbol(0, 0), ChannelToken::symbol(1, 0),
                         ChannelToken::symbol(0, 1), ChannelToken::symbol(1, 1),
                         ChannelToken::silence(), ChannelToken::erasure()}) {
    CHECK(ChannelToken::parse(t.str()) == t);
  }
  CHECK_THROWS_AS(ChannelToken::parse("sym:2,0"), Error);
  CHECK_THROWS_AS(ChannelToken::parse("garbage"), Error);
}

TEST_CASE("noise specs parse into finite sources") {
  auto none = make_noise("none");
  CHECK(none->budget() == 0);

  auto list = make_noise("list:1,5,9");
  CHECK(list->budget() == 3);
  NoiseContext ctx;
  ctx.wire_timestep = 5;
  CHECK(list->decide(ctx));
  ctx.wire_timestep = 4;
  CHECK(!list->decide(ctx));

  auto burst = make_noise("burst:start=3,len=4");
  CHECK(burst->budget() == 4);
  ctx.wire_timestep = 6;
  CHECK(burst->decide(ctx));
  ctx.wire_timestep = 7;
  CHECK(!burst->decide(ctx));

  auto random = make_noise("random:p=0.5,seed=42,horizon=100");
  CHECK(random->budget() > 0);
  CHECK(random->budget() <= 100);
  // drawn once: same spec, same pattern
  auto random2 = make_noise("random:p=0.5,seed=42,horizon=100");
  for (int64_t t = 1; t <= 100; ++t) {
    ctx.wire_timestep = t;
    CHECK(random->decide(ctx) == random2->decide(ctx));
  }

  CHECK_THROWS_AS(make_noise("random:p=2,seed=1,horizon=10"), Error);
  CHECK_THROWS_AS(make_noise("bogus:1"), Error);
  CHECK_THROWS_AS(make_noise("adversary:dfs,budget=3"), Error);
  CHECK_THROWS_AS(make_noise("list:x"), Error);
}

TEST_CASE("noise files load and reject malformed content") {
  std::string path = "/tmp/erasim_test_noise.json";
  {
    std::ofstream out(path);
    out << R"({"erase": [2, 7]})";
  }
  auto src = make_noise("file:" + path);
  CHECK(src->budget() == 2);
  {
    std::ofstream out(path);
    out << R"({"erase": "nope"})";
  }
  CHECK_THROWS_AS(make_noise("file:" + path), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(make_noise("file:/nonexistent/noise.json"), Error);
}

TEST_CASE("greedy adversary spends one erasure per challenge") {
  auto greedy = make_greedy_adversary(2);
  greedy->reset();
  NoiseContext ctx;
  ctx.slots_per_token = 1;
  ctx.sender = Role::alice;
  ctx.slot_index = 0;
  ctx.wire_timestep = 1;
  CHECK(greedy->decide(ctx));
  ctx.sender = Role::bob;
  ctx.wire_timestep = 2;
  CHECK(!greedy->decide(ctx));
  ctx.sender = Role::alice;
  ctx.wire_timestep = 3;
  CHECK(greedy->decide(ctx));
  ctx.wire_timestep = 5;
  CHECK(!greedy->decide(ctx));  // budget exhausted

  // it needs two slots to invalidate an ECC-coded symbol
  auto ecc = make_greedy_adversary(3);
  ecc->reset();
  NoiseContext e;
  e.slots_per_token = 3;
  e.sender = Role::alice;
  int erased = 0;
  for (int j = 0; j < 3; ++j) {
    e.slot_index = j;
    e.wire_timestep = j + 1;
    if (ecc->decide(e)) ++erased;
  }
  CHECK(erased == 2);
  // one left: not enough to kill another symbol, so it holds fire
  for (int j = 0; j < 3; ++j) {
    e.slot_index = j;
    e.wire_timestep = 7 + j;
    CHECK(!ecc->decide(e));
  }
}
