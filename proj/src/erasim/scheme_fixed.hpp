#pragma once

#include <span>
#include <utility>
#include <vector>

#include "erasim/channel.hpp"
#include "erasim/protocol.hpp"

namespace erasim::fixed {

// Challenge-response simulation where parties must speak a valid symbol in
// every timestep they own. Alice opens each round with the next bit of the
// noiseless protocol tagged with her round parity; Bob answers with his
// next bit under the same parity, or repeats his previous message when the
// challenge was erased or stale. Alice rolls her round back whenever the
// response does not echo her parity. Alice exits once she has simulated
// every round; Bob exits when he hears the silence her exit leaves behind.
//
// The steps are pure (state in, state out) so a scheduler can interleave
// them and inspect every intermediate state.

struct AliceState {
  Bits transcript;
  int round = 0;
  bool terminated = false;
};

struct BobState {
  Bits transcript;
  int round = 0;
  bool err = false;
  // Bob's most recent response, re-sent verbatim while err is set.
  ChannelToken saved = ChannelToken::symbol(0, 0);
  bool terminated = false;
};

// Odd timestep: advance the round, append the next bit, emit it with the
// round parity. Calling after termination is a contract violation.
std::pair<AliceState, ChannelToken> alice_odd(const AliceState& s,
                                              const Protocol& pi,
                                              const Bits& x);

// Even timestep: a response carrying Alice's parity confirms the round
// (append Bob's bit); anything else rolls the round back by one bit.
// Receiving silence here is a contract violation: Bob cannot terminate
// first.
AliceState alice_even(const AliceState& s, const ChannelToken& received,
                      const Protocol& pi);

// Odd timestep: silence means Alice is done (terminate); an erasure or a
// stale parity raises err; a fresh challenge extends the transcript.
BobState bob_odd(const BobState& s, const ChannelToken& received);

// Even timestep: with err clear, generate and save the next response and
// advance the round; with err set, re-send the saved message untouched.
std::pair<BobState, ChannelToken> bob_even(const BobState& s,
                                           const Protocol& pi, const Bits& y);

// Naive two-bit symbol codec: (info, parity) as two wire bits. Any erased
// slot makes the whole symbol undecodable. Silence maps to two silent
// slots.
std::vector<WireSlot> encode_binary2(const ChannelToken& token);
ChannelToken decode_binary2(std::span<const RecvSlot> slots);

// Three-bit codec over the distance-2 code {000, 011, 110, 101}; a single
// erased slot still decodes, two or more yield the erasure mark. The
// symbol-to-codeword assignment is fixed here; any bijection preserves the
// distance.
std::vector<WireSlot> encode_ecc3(const ChannelToken& token);
ChannelToken decode_ecc3(std::span<const RecvSlot> slots);

}  // namespace erasim::fixed
