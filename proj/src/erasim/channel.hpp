#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "erasim/protocol.hpp"

namespace erasim {

// What travels in one scheme timestep: a 4-ary symbol (info bit plus the
// round-parity challenge), silence, or the erasure mark the channel leaves
// behind. Parties never send the erasure mark.
enum class TokenKind : uint8_t { symbol, silence, erasure };

struct ChannelToken {
  TokenKind kind = TokenKind::silence;
  uint8_t info = 0;    // meaningful only for symbols
  uint8_t parity = 0;  // meaningful only for symbols

  static ChannelToken symbol(int info, int parity) {
    return {TokenKind::symbol, static_cast<uint8_t>(info & 1),
            static_cast<uint8_t>(parity & 1)};
  }
  static ChannelToken silence() { return {TokenKind::silence, 0, 0}; }
  static ChannelToken erasure() { return {TokenKind::erasure, 0, 0}; }

  bool is_symbol() const { return kind == TokenKind::symbol; }
  bool is_silence() const { return kind == TokenKind::silence; }
  bool is_erasure() const { return kind == TokenKind::erasure; }

  bool operator==(const ChannelToken& o) const {
    if (kind != o.kind) return false;
    if (kind != TokenKind::symbol) return true;
    return info == o.info && parity == o.parity;
  }
  bool operator!=(const ChannelToken& o) const { return !(*this == o); }

  std::string str() const;                      // "sym:b,p" | "silence" | "erasure"
  static ChannelToken parse(const std::string& s);
};

// One timestep of the erasure channel: delivers the token intact or
// replaces it with the erasure mark; content is never substituted.
// Silence is corruptible like any symbol. Transmitting an erasure mark is
// a contract violation.
ChannelToken transmit(const ChannelToken& token, bool erase);

// Sub-symbol wire values used by the layered schemes (two-bit, three-bit
// ECC, and unary blocks).
enum class WireSlot : uint8_t { bit0, bit1, silent, energy };

struct RecvSlot {
  bool erased = false;
  WireSlot value = WireSlot::silent;  // meaningful only when !erased
};

// A static erasure pattern over global wire timesteps (1-based). Finite by
// construction.
struct NoisePattern {
  std::set<int64_t> erased;

  bool contains(int64_t t) const { return erased.count(t) != 0; }
  static NoisePattern from_list(const std::vector<int64_t>& ts);
  static NoisePattern from_file(const std::string& path);
};

// What an online adversary sees before deciding whether to erase the wire
// slot in flight: the full plaintext history of both parties plus the
// current sender's state. Deterministic schemes make this no stronger than
// a fixed pattern, but it is convenient for worst-case search.
struct SentEvent {
  int64_t wire_timestep;
  Role sender;
  ChannelToken token;
  bool injected;  // harness-materialized silence after termination
};

struct NoiseContext {
  int64_t wire_timestep = 0;  // global, 1-based
  int token_timestep = 0;     // 4-ary timestep this slot belongs to
  int round = 0;
  int slot_index = 0;  // 0-based within the token
  int slots_per_token = 1;
  Role sender = Role::alice;
  bool sender_injected = false;
  ChannelToken token;  // plaintext token in flight
  const std::vector<SentEvent>* history = nullptr;
};

class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual bool decide(const NoiseContext& ctx) = 0;
  // Upper bound on erasures this source will ever apply; all sources are
  // finite so runs provably end.
  virtual int64_t budget() const = 0;
  virtual std::string spec() const = 0;
  // Called at the start of every run so a source can be reused.
  virtual void reset() {}
};

std::unique_ptr<NoiseSource> make_pattern_noise(NoisePattern pattern);
// Erases the earliest slot(s) of every challenge (Alice's transmission,
// enough slots to invalidate the whole symbol) while budget remains and
// Alice is still active. Validated as worst-case against exhaustive search
// on small instances.
std::unique_ptr<NoiseSource> make_greedy_adversary(int64_t budget);

// Parses "none" | "file:PATH" | "list:t1,t2,..." |
// "random:p=P,seed=S,horizon=H" | "burst:start=A,len=B" |
// "adversary:greedy,budget=T".
std::unique_ptr<NoiseSource> make_noise(const std::string& spec);

}  // namespace erasim
