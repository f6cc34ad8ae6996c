#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

namespace erasim {

// Bit strings ("0"/"1" per character): inputs, transcripts, outputs.
using Bits = std::string;

enum class Role : uint8_t { alice, bob };

const char* role_name(Role r);
Role other(Role r);

// In an alternating protocol Alice owns odd positions, Bob even ones
// (1-based).
Role speaker_for_position(int position);

bool valid_bits(const Bits& bits);

// Deterministic next-bit oracle: the value party `role`, holding `input`,
// sends after the shared transcript `transcript`.
using NextBitFn =
    std::function<int(Role role, const Bits& input, const Bits& transcript)>;

// A noiseless two-party protocol: a length, a speaker per position, and a
// pure next-bit oracle. Immutable after construction; safe to share across
// threads. Positions flagged as padding carry constant-0 filler introduced
// by normalize() and can be stripped from transcripts afterwards.
class Protocol {
 public:
  Protocol() = default;
  Protocol(std::vector<Role> speakers, std::vector<uint8_t> pad_mask,
           NextBitFn next_bit, std::string name, int required_input_bits = -1);

  // Alice's bit at round r is x[r-1], Bob's is y[r-1]; inputs of n_bits/2
  // bits each.
  static Protocol string_exchange(int n_bits);
  // Every message is `bit`, regardless of inputs.
  static Protocol constant(int n_bits, int bit);
  // Table-backed: the next bit is entries[transcript]; inputs are ignored.
  static Protocol from_table(int n_bits,
                             std::unordered_map<Bits, int> entries,
                             std::string name);
  static Protocol from_table_file(const std::string& path);
  // Pseudorandom pure oracle; the bit is a stable hash of
  // (seed, role, input, transcript). Used for large fuzzed instances where
  // materializing a table would be wasteful.
  static Protocol random_oracle(int n_bits, uint64_t seed);
  // "builtin:string-exchange:N" | "file:PATH" | bare path.
  static Protocol from_spec(const std::string& spec);

  int length() const { return static_cast<int>(speakers_.size()); }
  int half_rounds() const { return length() / 2; }
  Role speaker(int position) const;  // 1-based
  bool pad_at(int position) const;   // 1-based
  bool has_padding() const;
  bool alternating() const;
  // Alternating, even length, nonempty: the shape every coding scheme
  // consumes.
  bool normalized() const;
  int next_bit(Role role, const Bits& input, const Bits& transcript) const;
  const std::string& name() const { return name_; }
  // Bits each party's input must have, or -1 when the oracle does not care.
  int required_input_bits() const { return required_input_bits_; }

 private:
  std::vector<Role> speakers_;
  std::vector<uint8_t> pad_mask_;
  NextBitFn next_bit_;
  std::string name_;
  int required_input_bits_ = -1;
};

// Rewrites a protocol so that speakers strictly alternate starting with
// Alice and the final message belongs to Bob, inserting constant-0 padding
// positions where needed. Already-normalized protocols are returned
// unchanged. The original transcript is recoverable via strip_padding().
// Output length is at most twice the input length. Rejects empty protocols.
Protocol normalize(const Protocol& raw);

// Noise-free replay for any speaker ordering (test oracle for normalize).
Bits replay_transcript(const Protocol& p, const Bits& x, const Bits& y);

// Noise-free replay of a normalized protocol; the value both parties must
// output after any simulation.
Bits reference_transcript(const Protocol& p, const Bits& x, const Bits& y);

// Drops the characters of `transcript` at padding positions.
Bits strip_padding(const Protocol& p, const Bits& transcript);

// Validates an (x, y) pair against the protocol's input contract.
void check_inputs(const Protocol& p, const Bits& x, const Bits& y);

// Stable 64-bit FNV-1a, used by the pseudorandom oracle.
uint64_t fnv1a64(const void* data, size_t len, uint64_t seed = 0xcbf29ce484222325ull);

}  // namespace erasim
