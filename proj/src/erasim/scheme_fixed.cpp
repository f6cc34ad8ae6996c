#include "erasim/scheme_fixed.hpp"

#include <array>

#include "erasim/error.hpp"

namespace erasim::fixed {

std::pair<AliceState, ChannelToken> alice_odd(const AliceState& s,
                                              const Protocol& pi,
                                              const Bits& x) {
  if (s.terminated)
    fail(Errc::internal, "alice_odd called after termination");
  AliceState n = s;
  n.round += 1;
  int b = pi.next_bit(Role::alice, x, n.transcript);
  n.transcript.push_back(b ? '1' : '0');
  return {n, ChannelToken::symbol(b, n.round % 2)};
}

AliceState alice_even(const AliceState& s, const ChannelToken& received,
                      const Protocol& pi) {
  if (s.terminated)
    fail(Errc::internal, "alice_even called after termination");
  if (received.is_silence())
    fail(Errc::internal,
         "alice_even received silence: Bob cannot terminate before Alice");
  AliceState n = s;
  if (received.is_symbol() && received.parity == n.round % 2) {
    n.transcript.push_back(received.info ? '1' : '0');
  } else {
    // Erased or stale response: undo this round's tentative bit.
    n.transcript.pop_back();
    n.round -= 1;
  }
  if (n.round == pi.half_rounds()) n.terminated = true;
  return n;
}

BobState bob_odd(const BobState& s, const ChannelToken& received) {
  if (s.terminated) fail(Errc::internal, "bob_odd called after termination");
  BobState n = s;
  if (received.is_silence()) {
    n.terminated = true;
    return n;
  }
  if (received.is_erasure() || received.parity == n.round % 2) {
    n.err = true;  // error detected; round will be re-simulated
  } else {
    n.transcript.push_back(received.info ? '1' : '0');
    n.err = false;
  }
  return n;
}

std::pair<BobState, ChannelToken> bob_even(const BobState& s,
                                           const Protocol& pi, const Bits& y) {
  if (s.terminated) fail(Errc::internal, "bob_even called after termination");
  BobState n = s;
  if (!n.err) {
    int b = pi.next_bit(Role::bob, y, n.transcript);
    n.transcript.push_back(b ? '1' : '0');
    n.round += 1;
    n.saved = ChannelToken::symbol(b, n.round % 2);
  }
  return {n, n.saved};
}

std::vector<WireSlot> encode_binary2(const ChannelToken& token) {
  if (token.is_erasure())
    fail(Errc::internal, "cannot encode the erasure mark");
  if (token.is_silence()) return {WireSlot::silent, WireSlot::silent};
  return {token.info ? WireSlot::bit1 : WireSlot::bit0,
          token.parity ? WireSlot::bit1 : WireSlot::bit0};
}

namespace {

bool slot_is_bit(WireSlot s) {
  return s == WireSlot::bit0 || s == WireSlot::bit1;
}

int slot_bit(WireSlot s) { return s == WireSlot::bit1 ? 1 : 0; }

// Codeword per symbol, indexed by info + 2*parity.
constexpr std::array<std::array<int, 3>, 4> kEcc3Codewords = {{
    {0, 0, 0},  // (0,0)
    {0, 1, 1},  // (1,0)
    {1, 1, 0},  // (0,1)
    {1, 0, 1},  // (1,1)
}};

}  // namespace

ChannelToken decode_binary2(std::span<const RecvSlot> slots) {
  if (slots.size() != 2) fail(Errc::internal, "binary2 word must have 2 slots");
  for (const RecvSlot& s : slots) {
    if (s.erased) return ChannelToken::erasure();
  }
  if (slots[0].value == WireSlot::silent && slots[1].value == WireSlot::silent)
    return ChannelToken::silence();
  if (slot_is_bit(slots[0].value) && slot_is_bit(slots[1].value))
    return ChannelToken::symbol(slot_bit(slots[0].value),
                                slot_bit(slots[1].value));
  fail(Errc::internal, "binary2: clean word outside the code");
}

std::vector<WireSlot> encode_ecc3(const ChannelToken& token) {
  if (token.is_erasure())
    fail(Errc::internal, "cannot encode the erasure mark");
  if (token.is_silence())
    return {WireSlot::silent, WireSlot::silent, WireSlot::silent};
  const auto& w = kEcc3Codewords[token.info + 2 * token.parity];
  std::vector<WireSlot> out;
  out.reserve(3);
  for (int bit : w) out.push_back(bit ? WireSlot::bit1 : WireSlot::bit0);
  return out;
}

ChannelToken decode_ecc3(std::span<const RecvSlot> slots) {
  if (slots.size() != 3) fail(Errc::internal, "ecc3 word must have 3 slots");
  bool any_erased = false;
  bool any_bit = false;
  bool any_silent = false;
  for (const RecvSlot& s : slots) {
    if (s.erased)
      any_erased = true;
    else if (slot_is_bit(s.value))
      any_bit = true;
    else
      any_silent = true;
  }
  if (!any_erased) {
    if (any_silent && !any_bit) return ChannelToken::silence();
    if (any_silent && any_bit)
      fail(Errc::internal, "ecc3: clean word mixes bits and silence");
    // Fall through: all three slots are clean bits.
  } else if (!any_bit) {
    // Nothing readable contradicts silence, but nothing confirms a
    // codeword either: undecodable.
    return ChannelToken::erasure();
  }
  int matches = 0;
  int matched = -1;
  for (int c = 0; c < 4; ++c) {
    bool ok = true;
    for (size_t j = 0; j < 3; ++j) {
      const RecvSlot& s = slots[j];
      if (s.erased) continue;
      if (!slot_is_bit(s.value) || slot_bit(s.value) != kEcc3Codewords[c][j]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      ++matches;
      matched = c;
    }
  }
  if (matches == 1) return ChannelToken::symbol(matched & 1, matched >> 1);
  if (!any_erased) fail(Errc::internal, "ecc3: clean word outside the code");
  return ChannelToken::erasure();
}

}  // namespace erasim::fixed
