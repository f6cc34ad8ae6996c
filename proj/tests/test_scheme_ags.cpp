#include "erasim/scheme_ags.hpp"

#include "doctest.h"

using namespace erasim;
using namespace erasim::ags;

TEST_CASE("fresh alice speaks in round one") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  auto [s1, tok] = alice_odd(s, pi, "10");
  CHECK(tok == ChannelToken::symbol(1, 1));
  CHECK(s1.round == 1);
  CHECK(s1.transcript == "");  // appended only once the round is confirmed
}

TEST_CASE("alice is silent after receiving an erasure, but still advances "
          "her tentative round") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.last_received = ChannelToken::erasure();
  auto [s1, tok] = alice_odd(s, pi, "10");
  CHECK(tok.is_silence());
  CHECK(s1.round == 1);
}

TEST_CASE("silence heard is not an erasure: alice speaks next") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.last_received = ChannelToken::silence();
  auto [s1, tok] = alice_odd(s, pi, "10");
  CHECK(tok.is_symbol());
}

TEST_CASE("alice appends both bits on a matching response") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  AliceState s1 = alice_even(s, ChannelToken::symbol(0, 1), pi, "10");
  CHECK(s1.transcript == "10");
  CHECK(s1.round == 1);
  CHECK(s1.last_received == ChannelToken::symbol(0, 1));
}

TEST_CASE("alice retreats on silence") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  AliceState s1 = alice_even(s, ChannelToken::silence(), pi, "10");
  CHECK(s1.round == 0);
  CHECK(s1.transcript == "");
}

TEST_CASE("alice retreats on an erasure and will be silent next") {
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.round = 1;
  AliceState s1 = alice_even(s, ChannelToken::erasure(), pi, "10");
  CHECK(s1.round == 0);
  CHECK(s1.last_received.is_erasure());
  auto [s2, tok] = alice_odd(s1, pi, "10");
  CHECK(tok.is_silence());
  (void)s2;
}

TEST_CASE("alice accepting a re-sent response while she was silent") {
  // She retreated after an erasure, stayed silent, then Bob's saved
  // message with her (re-incremented) parity completes the round.
  Protocol pi = Protocol::string_exchange(4);
  AliceState s;
  s.last_received = ChannelToken::erasure();
  auto [s1, tok] = alice_odd(s, pi, "10");
  REQUIRE(tok.is_silence());
  AliceState s2 = alice_even(s1, ChannelToken::symbol(0, 1), pi, "10");
  CHECK(s2.round == 1);
  CHECK(s2.transcript == "10");
}

TEST_CASE("bob advances on a fresh challenge and prepares his reply") {
  Protocol pi = Protocol::string_exchange(4);
  BobState s;
  BobState s1 = bob_odd(s, ChannelToken::symbol(1, 1), pi, "01");
  CHECK(s1.round == 1);
  CHECK(s1.transcript == "10");
  CHECK(s1.response_bit == 0);
}

TEST_CASE("bob ignores an erasure and replies with silence") {
  Protocol pi = Protocol::string_exchange(4);
  BobState s;
  BobState s1 = bob_odd(s, ChannelToken::erasure(), pi, "01");
  CHECK(s1.round == 0);
  CHECK(s1.transcript == "");
  auto [s2, tok] = bob_even(s1, pi);
  CHECK(tok.is_silence());
  (void)s2;
}

TEST_CASE("bob re-sends his saved message on a stale challenge") {
  Protocol pi = Protocol::string_exchange(4);
  BobState s;
  s.round = 1;
  s.transcript = "10";
  s.response_bit = 0;
  BobState s1 = bob_odd(s, ChannelToken::symbol(1, 1), pi, "01");
  CHECK(s1.round == 1);  // parity 1 = his round parity: stale
  auto [s2, tok] = bob_even(s1, pi);
  CHECK(tok == ChannelToken::symbol(0, 1));
  (void)s2;
}

TEST_CASE("bob switches to the termination phase after his last round") {
  Protocol pi = Protocol::string_exchange(2);
  BobState s;
  BobState s1 = bob_odd(s, ChannelToken::symbol(1, 1), pi, "1");
  CHECK(s1.round == 1);  // N/2 for N = 2
  CHECK(s1.phase == BobPhase::simulating);
  auto [s2, tok] = bob_even(s1, pi);
  // the completing round still answers with the final message
  CHECK(tok == ChannelToken::symbol(1, 1));
  CHECK(s2.phase == BobPhase::termination);
}

TEST_CASE("termination phase: final message only for a matching parity") {
  Protocol pi = Protocol::string_exchange(2);
  BobState s;
  s.round = 1;
  s.transcript = "11";
  s.response_bit = 1;
  s.phase = BobPhase::termination;

  s.last_received = ChannelToken::symbol(1, 1);
  auto [s1, tok1] = bob_even(s, pi);
  CHECK(tok1 == ChannelToken::symbol(1, 1));
  (void)s1;

  s.last_received = ChannelToken::silence();
  auto [s2, tok2] = bob_even(s, pi);
  CHECK(tok2.is_silence());
  (void)s2;

  s.last_received = ChannelToken::erasure();
  auto [s3, tok3] = bob_even(s, pi);
  CHECK(tok3.is_silence());
  (void)s3;

  s.last_received = ChannelToken::symbol(0, 0);
  auto [s4, tok4] = bob_even(s, pi);
  CHECK(tok4.is_silence());
  (void)s4;
}
