#include "erasim/scheme_ags.hpp"

#include "erasim/error.hpp"

namespace erasim::ags {

std::pair<AliceState, ChannelToken> alice_odd(const AliceState& s,
                                              const Protocol& pi,
                                              const Bits& x) {
  if (s.terminated)
    fail(Errc::internal, "ags alice_odd called after termination");
  AliceState n = s;
  n.round += 1;  // incremented even when the timestep stays silent
  if (n.last_received.is_erasure()) return {n, ChannelToken::silence()};
  int b = pi.next_bit(Role::alice, x, n.transcript);
  return {n, ChannelToken::symbol(b, n.round % 2)};
}

AliceState alice_even(const AliceState& s, const ChannelToken& received,
                      const Protocol& pi, const Bits& x) {
  if (s.terminated)
    fail(Errc::internal, "ags alice_even called after termination");
  AliceState n = s;
  if (received.is_symbol() && received.parity == n.round % 2) {
    int b = pi.next_bit(Role::alice, x, n.transcript);
    n.transcript.push_back(b ? '1' : '0');
    n.transcript.push_back(received.info ? '1' : '0');
  } else {
    // Silence and erasures carry no parity and fail the test as well.
    n.round -= 1;
  }
  n.last_received = received;
  if (n.round == pi.half_rounds()) n.terminated = true;
  return n;
}

BobState bob_odd(const BobState& s, const ChannelToken& received,
                 const Protocol& pi, const Bits& y) {
  BobState n = s;
  n.last_received = received;
  if (n.phase == BobPhase::termination) return n;
  if (received.is_symbol() && received.parity == (n.round + 1) % 2) {
    n.round += 1;
    Bits extended = n.transcript;
    extended.push_back(received.info ? '1' : '0');
    int b = pi.next_bit(Role::bob, y, extended);
    n.response_bit = static_cast<uint8_t>(b);
    n.transcript = extended;
    n.transcript.push_back(b ? '1' : '0');
  }
  return n;
}

std::pair<BobState, ChannelToken> bob_even(const BobState& s,
                                           const Protocol& pi) {
  BobState n = s;
  ChannelToken out = ChannelToken::silence();
  if (n.phase == BobPhase::simulating) {
    if (!n.last_received.is_erasure())
      out = ChannelToken::symbol(n.response_bit, n.round % 2);
    // The round that completed the final simulated round still answers by
    // the rules above; the termination behavior starts with the next one.
    if (n.round == pi.half_rounds()) n.phase = BobPhase::termination;
  } else {
    if (n.last_received.is_symbol() &&
        n.last_received.parity == n.round % 2)
      out = ChannelToken::symbol(n.response_bit, n.round % 2);
  }
  return {n, out};
}

}  // namespace erasim::ags
