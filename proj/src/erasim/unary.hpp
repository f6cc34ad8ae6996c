#pragma once

#include <span>
#include <vector>

#include "erasim/channel.hpp"

namespace erasim {

// Temporal unary coding: each 4-ary timestep becomes a block of four wire
// timesteps owned by the same party. A symbol (b, p) puts energy in slot
// b + 2p + 1 (1-based) and silence elsewhere; silence is an all-silent
// block. A received block decodes to the symbol when exactly one clean
// energy slot remains and nothing was erased, to silence when all four
// slots are cleanly silent, and to the erasure mark in every other case --
// in particular whenever any slot was erased, since an erased slot could
// have hidden the energy.

inline constexpr int kUnaryBlockSlots = 4;

std::vector<WireSlot> encode_unary_block(const ChannelToken& token);
ChannelToken decode_unary_block(std::span<const RecvSlot> slots);

}  // namespace erasim
