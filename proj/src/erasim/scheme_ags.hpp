#pragma once

#include <utility>

#include "erasim/channel.hpp"
#include "erasim/protocol.hpp"

namespace erasim::ags {

// Variant of the challenge-response scheme for the setting where an active
// party may stay silent, and silence costs nothing. A party that receives
// an erasure stays silent for one timestep, asking for a retransmission;
// parities resolve which round a message belongs to exactly as in the
// fixed-setting scheme. Alice terminates once she has simulated every
// round. Bob never terminates: after simulating his final round he enters
// a termination phase where he answers only a re-simulation of the last
// round with his final message and stays silent otherwise, so that after
// Alice's exit both sides are silent forever (semi-termination).

struct AliceState {
  Bits transcript;
  int round = 0;
  // The previous even-timestep delivery; an erasure here makes the next
  // odd timestep silent. Starts as the dummy (0,0) symbol so round 1 is
  // spoken.
  ChannelToken last_received = ChannelToken::symbol(0, 0);
  bool terminated = false;
};

enum class BobPhase : uint8_t { simulating, termination };

struct BobState {
  Bits transcript;
  int round = 0;
  uint8_t response_bit = 0;  // info bit of Bob's latest (or re-sent) message
  ChannelToken last_received = ChannelToken::symbol(0, 0);
  BobPhase phase = BobPhase::simulating;
};

// Odd timestep: advance the round; speak the next bit with the new round's
// parity unless the last delivery was an erasure, in which case stay
// silent.
std::pair<AliceState, ChannelToken> alice_odd(const AliceState& s,
                                              const Protocol& pi,
                                              const Bits& x);

// Even timestep: a symbol carrying Alice's parity completes the round (her
// own bit and the received bit are appended together); every other
// delivery (erasure, silence, stale parity) rolls the round counter back.
AliceState alice_even(const AliceState& s, const ChannelToken& received,
                      const Protocol& pi, const Bits& x);

// Odd timestep: a symbol with the next round's parity extends the
// transcript by the received bit and Bob's reply; anything else leaves the
// state untouched apart from recording the delivery.
BobState bob_odd(const BobState& s, const ChannelToken& received,
                 const Protocol& pi, const Bits& y);

// Even timestep. While simulating: re-send the saved response unless the
// delivery was an erasure (then silence). In termination phase: re-send
// the final response only for a symbol matching the final parity, silence
// otherwise. The phase flips at the end of the round that completed the
// final simulated round.
std::pair<BobState, ChannelToken> bob_even(const BobState& s,
                                           const Protocol& pi);

}  // namespace erasim::ags
