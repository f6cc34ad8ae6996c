#include "erasim/scheme_fixed.hpp"

#include "doctest.h"

using namespace erasim;
using namespace erasim::fixed;

// Step-level expectations below were frozen from hand replays of the
// scheme on the string-exchange protocol.

TEST_CASE("alice opens round one with her first bit and parity 1") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  auto [s1, tok] = alice_odd(s, pi, "10");
  CHECK(tok == ChannelToken::symbol(1, 1));
  CHECK(s1.round == 1);
  CHECK(s1.transcript == "1");
  CHECK(!tok.is_silence());
  CHECK(!tok.is_erasure());
}

TEST_CASE("alice's second challenge carries parity 0") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  s.transcript = "10";
  auto [s1, tok] = alice_odd(s, pi, "10");
  CHECK(tok == ChannelToken::symbol(0, 0));  // x_2 = 0, parity 2 mod 2
  CHECK(s1.round == 2);
  CHECK(s1.transcript == "100");
}

TEST_CASE("alice accepts a matching response and completes the round") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  s.transcript = "1";
  AliceState s1 = alice_even(s, ChannelToken::symbol(0, 1), pi);
  CHECK(s1.transcript == "10");
  CHECK(s1.round == 1);
  CHECK(!s1.terminated);
}

TEST_CASE("alice rolls back on an erasure") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  s.transcript = "1";
  AliceState s1 = alice_even(s, ChannelToken::erasure(), pi);
  CHECK(s1.transcript == "");
  CHECK(s1.round == 0);
}

TEST_CASE("alice rolls back on a stale parity") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  s.transcript = "1";
  AliceState s1 = alice_even(s, ChannelToken::symbol(1, 0), pi);
  CHECK(s1.transcript == "");
  CHECK(s1.round == 0);
}

TEST_CASE("alice terminates when the final round completes") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 2;
  s.transcript = "100";
  AliceState s1 = alice_even(s, ChannelToken::symbol(1, 0), pi);
  CHECK(s1.terminated);
  CHECK(s1.transcript == "1001");
  CHECK_THROWS(alice_odd(s1, pi, "10"));
}

TEST_CASE("silence toward alice is a contract violation") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  s.transcript = "1";
  CHECK_THROWS(alice_even(s, ChannelToken::silence(), pi));
}

TEST_CASE("bob records a fresh challenge") {
  BobState s;
  BobState s1 = bob_odd(s, ChannelToken::symbol(1, 1));
  CHECK(s1.transcript == "1");
  CHECK(!s1.err);
  CHECK(!s1.terminated);
}

TEST_CASE("bob flags an erasure and keeps his state") {
  BobState s;
  BobState s1 = bob_odd(s, ChannelToken::erasure());
  CHECK(s1.err);
  CHECK(s1.transcript == "");
  CHECK(s1.round == 0);
}

TEST_CASE("bob flags a stale parity") {
  BobState s;
  s.round = 1;
  s.transcript = "10";
  s.saved = ChannelToken::symbol(0, 1);
  // parity equal to his round count means a re-simulated round
  BobState s1 = bob_odd(s, ChannelToken::symbol(0, 1));
  CHECK(s1.err);
  CHECK(s1.transcript == "10");
}

TEST_CASE("bob terminates on silence without replying") {
  BobState s;
  s.round = 2;
  s.transcript = "1001";
  BobState s1 = bob_odd(s, ChannelToken::silence());
  CHECK(s1.terminated);
}

TEST_CASE("bob's response advances his round and is saved") {
  Protocol pi = Protocol::string_exchange(4);
  BobState s;
  s.transcript = "1";
  s.err = false;
  auto [s1, tok] = bob_even(s, pi, "01");
  CHECK(tok == ChannelToken::symbol(0, 1));  // y_1 = 0, parity 1
  CHECK(s1.transcript == "10");
  CHECK(s1.round == 1);
  CHECK(s1.saved == tok);
}

TEST_CASE("bob re-sends the saved message verbatim under err") {
  Protocol pi = Protocol::string_exchange(4);
  BobState s;
  s.round = 1;
  s.transcript = "10";
  s.err = true;
  s.saved = ChannelToken::symbol(0, 1);
  auto [s1, tok] = bob_even(s, pi, "01");
  CHECK(tok == ChannelToken::symbol(0, 1));
  CHECK(s1.round == 1);
  CHECK(s1.transcript == "10");
}

TEST_CASE("bob's very first err reply is the initial (0,0) message") {
  Protocol pi = Protocol::string_exchange(4);
  BobState s;
  s.err = true;
  auto [s1, tok] = bob_even(s, pi, "01");
  CHECK(tok == ChannelToken::symbol(0, 0));
  CHECK(s1.round == 0);
}
