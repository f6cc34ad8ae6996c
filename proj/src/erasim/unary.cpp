#include "erasim/unary.hpp"

#include "erasim/error.hpp"

namespace erasim {

std::vector<WireSlot> encode_unary_block(const ChannelToken& token) {
  if (token.is_erasure())
    fail(Errc::internal, "cannot encode the erasure mark");
  std::vector<WireSlot> slots(kUnaryBlockSlots, WireSlot::silent);
  if (token.is_symbol())
    slots[static_cast<size_t>(token.info + 2 * token.parity)] = WireSlot::energy;
  return slots;
}

ChannelToken decode_unary_block(std::span<const RecvSlot> slots) {
  if (slots.size() != kUnaryBlockSlots)
    fail(Errc::internal, "unary block must have 4 slots");
  int energy_at = -1;
  int energy_count = 0;
  for (int j = 0; j < kUnaryBlockSlots; ++j) {
    if (slots[static_cast<size_t>(j)].erased) return ChannelToken::erasure();
    if (slots[static_cast<size_t>(j)].value == WireSlot::energy) {
      energy_at = j;
      ++energy_count;
    }
  }
  if (energy_count == 1) return ChannelToken::symbol(energy_at & 1, energy_at >> 1);
  if (energy_count == 0) return ChannelToken::silence();
  return ChannelToken::erasure();
}

}  // namespace erasim
