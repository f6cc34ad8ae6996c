#include "erasim/protocol.hpp"

#include <fstream>
#include <memory>
#include <utility>

#include "erasim/error.hpp"
#include "json.hpp"

namespace erasim {

const char* role_name(Role r) { return r == Role::alice ? "alice" : "bob"; }

Role other(Role r) { return r == Role::alice ? Role::bob : Role::alice; }

Role speaker_for_position(int position) {
  return (position % 2 == 1) ? Role::alice : Role::bob;
}

bool valid_bits(const Bits& bits) {
  for (char c : bits) {
    if (c != '0' && c != '1') return false;
  }
  return true;
}

uint64_t fnv1a64(const void* data, size_t len, uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  uint64_t h = seed;
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

Protocol::Protocol(std::vector<Role> speakers, std::vector<uint8_t> pad_mask,
                   NextBitFn next_bit, std::string name,
                   int required_input_bits)
    : speakers_(std::move(speakers)),
      pad_mask_(std::move(pad_mask)),
      next_bit_(std::move(next_bit)),
      name_(std::move(name)),
      required_input_bits_(required_input_bits) {
  if (pad_mask_.empty()) pad_mask_.assign(speakers_.size(), 0);
  if (pad_mask_.size() != speakers_.size())
    fail(Errc::internal, "protocol pad mask size mismatch");
}

Role Protocol::speaker(int position) const {
  if (position < 1 || position > length())
    fail(Errc::internal, "protocol position out of range");
  return speakers_[static_cast<size_t>(position) - 1];
}

bool Protocol::pad_at(int position) const {
  if (position < 1 || position > length())
    fail(Errc::internal, "protocol position out of range");
  return pad_mask_[static_cast<size_t>(position) - 1] != 0;
}

bool Protocol::has_padding() const {
  for (uint8_t f : pad_mask_)
    if (f) return true;
  return false;
}

bool Protocol::alternating() const {
  for (int pos = 1; pos <= length(); ++pos) {
    if (speakers_[static_cast<size_t>(pos) - 1] != speaker_for_position(pos))
      return false;
  }
  return true;
}

bool Protocol::normalized() const {
  return length() > 0 && length() % 2 == 0 && alternating();
}

int Protocol::next_bit(Role role, const Bits& input,
                       const Bits& transcript) const {
  if (!next_bit_) fail(Errc::internal, "protocol has no next-bit oracle");
  int b = next_bit_(role, input, transcript);
  if (b != 0 && b != 1) fail(Errc::internal, "next-bit oracle returned a non-bit");
  return b;
}

namespace {

std::vector<Role> alternating_speakers(int n_bits) {
  std::vector<Role> speakers;
  speakers.reserve(static_cast<size_t>(n_bits));
  for (int pos = 1; pos <= n_bits; ++pos)
    speakers.push_back(speaker_for_position(pos));
  return speakers;
}

}  // namespace

Protocol Protocol::string_exchange(int n_bits) {
  if (n_bits <= 0 || n_bits % 2 != 0)
    fail(Errc::usage, "string-exchange needs a positive even bit count");
  auto fn = [](Role, const Bits& input, const Bits& transcript) -> int {
    size_t round_index = transcript.size() / 2;  // 0-based round of this bit
    if (round_index >= input.size())
      fail(Errc::usage, "string-exchange input too short for this round");
    return input[round_index] == '1' ? 1 : 0;
  };
  return Protocol(alternating_speakers(n_bits), {}, fn,
                  "string-exchange:" + std::to_string(n_bits), n_bits / 2);
}

Protocol Protocol::constant(int n_bits, int bit) {
  if (n_bits <= 0 || n_bits % 2 != 0)
    fail(Errc::usage, "constant protocol needs a positive even bit count");
  auto fn = [bit](Role, const Bits&, const Bits&) -> int { return bit; };
  return Protocol(alternating_speakers(n_bits), {}, fn,
                  "constant" + std::to_string(bit) + ":" + std::to_string(n_bits),
                  -1);
}

Protocol Protocol::from_table(int n_bits,
                              std::unordered_map<Bits, int> entries,
                              std::string name) {
  if (n_bits <= 0) fail(Errc::usage, "protocol table: n_bits must be positive");
  if (n_bits % 2 != 0)
    fail(Errc::usage,
         "protocol table: n_bits must be even (the last message belongs to "
         "Bob); odd tables are rejected, not padded");
  for (const auto& [prefix, bit] : entries) {
    if (!valid_bits(prefix))
      fail(Errc::usage, "protocol table: key is not a bit string: " + prefix);
    if (static_cast<int>(prefix.size()) >= n_bits)
      fail(Errc::usage, "protocol table: key at least n_bits long: " + prefix);
    if (bit != 0 && bit != 1)
      fail(Errc::usage, "protocol table: entry value outside {0,1}");
  }
  auto table = std::make_shared<std::unordered_map<Bits, int>>(std::move(entries));
  auto fn = [table](Role, const Bits&, const Bits& transcript) -> int {
    auto it = table->find(transcript);
    if (it == table->end())
      fail(Errc::usage, "protocol table: missing entry for prefix \"" +
                            transcript + "\"");
    return it->second;
  };
  return Protocol(alternating_speakers(n_bits), {}, fn, std::move(name), 0);
}

Protocol Protocol::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open protocol table file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::usage, "protocol table " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("n_bits") || !j.contains("entries") ||
      !j["n_bits"].is_number_integer() || !j["entries"].is_object())
    fail(Errc::usage,
         "protocol table " + path +
             ": expected {\"n_bits\": N, \"entries\": {prefix: bit}}");
  std::unordered_map<Bits, int> entries;
  for (auto it = j["entries"].begin(); it != j["entries"].end(); ++it) {
    if (!it.value().is_number_integer())
      fail(Errc::usage, "protocol table " + path + ": non-integer entry");
    entries.emplace(it.key(), it.value().get<int>());
  }
  return from_table(j["n_bits"].get<int>(), std::move(entries),
                    "table:" + path);
}

Protocol Protocol::random_oracle(int n_bits, uint64_t seed) {
  if (n_bits <= 0 || n_bits % 2 != 0)
    fail(Errc::usage, "random protocol needs a positive even bit count");
  auto fn = [seed](Role role, const Bits& input, const Bits& transcript) -> int {
    uint64_t h = seed;
    uint8_t tag = role == Role::alice ? 0xA5 : 0x5A;
    h = fnv1a64(&tag, 1, h);
    h = fnv1a64(input.data(), input.size(), h);
    uint8_t sep = '|';
    h = fnv1a64(&sep, 1, h);
    h = fnv1a64(transcript.data(), transcript.size(), h);
    return static_cast<int>(h & 1u);
  };
  return Protocol(alternating_speakers(n_bits), {}, fn,
                  "random:" + std::to_string(n_bits) + ":" + std::to_string(seed),
                  -1);
}

Protocol Protocol::from_spec(const std::string& spec) {
  const std::string builtin_prefix = "builtin:string-exchange:";
  if (spec.rfind(builtin_prefix, 0) == 0) {
    const std::string arg = spec.substr(builtin_prefix.size());
    try {
      size_t used = 0;
      int n = std::stoi(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return string_exchange(n);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(Errc::usage, "bad protocol spec: " + spec);
    }
  }
  if (spec.rfind("builtin:", 0) == 0)
    fail(Errc::usage, "unknown builtin protocol: " + spec);
  if (spec.rfind("file:", 0) == 0) return from_table_file(spec.substr(5));
  return from_table_file(spec);
}

Protocol normalize(const Protocol& raw) {
  if (raw.length() == 0) fail(Errc::usage, "cannot normalize an empty protocol");
  if (raw.normalized()) return raw;

  // Walk the original positions, inserting a padding bit from the expected
  // speaker whenever the original speaker is out of turn, then pad the tail
  // so the final message belongs to Bob.
  struct Slot {
    bool pad;
    int orig_position;  // 1-based, pad slots carry 0
  };
  std::vector<Slot> slots;
  for (int pos = 1; pos <= raw.length(); ++pos) {
    Role expected = speaker_for_position(static_cast<int>(slots.size()) + 1);
    if (raw.speaker(pos) != expected) slots.push_back({true, 0});
    slots.push_back({false, pos});
  }
  if (slots.size() % 2 != 0) slots.push_back({true, 0});

  std::vector<Role> speakers;
  std::vector<uint8_t> pad_mask;
  speakers.reserve(slots.size());
  pad_mask.reserve(slots.size());
  for (size_t i = 0; i < slots.size(); ++i) {
    speakers.push_back(speaker_for_position(static_cast<int>(i) + 1));
    pad_mask.push_back(slots[i].pad ? 1 : 0);
  }

  auto inner = std::make_shared<Protocol>(raw);
  auto pads = std::make_shared<std::vector<uint8_t>>(pad_mask);
  auto fn = [inner, pads](Role role, const Bits& input,
                          const Bits& transcript) -> int {
    size_t next = transcript.size();  // 0-based index of the bit to produce
    if (next >= pads->size())
      fail(Errc::internal, "normalized protocol queried past its end");
    if ((*pads)[next]) return 0;
    Bits original;
    original.reserve(transcript.size());
    for (size_t i = 0; i < transcript.size(); ++i) {
      if (!(*pads)[i]) original.push_back(transcript[i]);
    }
    return inner->next_bit(role, input, original);
  };
  return Protocol(std::move(speakers), std::move(pad_mask), fn,
                  raw.name() + "|normalized", raw.required_input_bits());
}

Bits replay_transcript(const Protocol& p, const Bits& x, const Bits& y) {
  Bits transcript;
  transcript.reserve(static_cast<size_t>(p.length()));
  for (int pos = 1; pos <= p.length(); ++pos) {
    Role role = p.speaker(pos);
    const Bits& input = role == Role::alice ? x : y;
    transcript.push_back(p.next_bit(role, input, transcript) ? '1' : '0');
  }
  return transcript;
}

Bits reference_transcript(const Protocol& p, const Bits& x, const Bits& y) {
  if (p.length() == 0) fail(Errc::usage, "empty protocol has no transcript");
  if (!p.normalized())
    fail(Errc::usage, "reference_transcript requires a normalized protocol");
  return replay_transcript(p, x, y);
}

Bits strip_padding(const Protocol& p, const Bits& transcript) {
  if (static_cast<int>(transcript.size()) > p.length())
    fail(Errc::usage, "transcript longer than protocol");
  Bits out;
  for (size_t i = 0; i < transcript.size(); ++i) {
    if (!p.pad_at(static_cast<int>(i) + 1)) out.push_back(transcript[i]);
  }
  return out;
}

void check_inputs(const Protocol& p, const Bits& x, const Bits& y) {
  if (!valid_bits(x) || !valid_bits(y))
    fail(Errc::usage, "inputs must be strings over {0,1}");
  int need = p.required_input_bits();
  if (need >= 0) {
    if (static_cast<int>(x.size()) != need ||
        static_cast<int>(y.size()) != need)
      fail(Errc::usage, "protocol " + p.name() + " needs inputs of " +
                            std::to_string(need) + " bits");
  }
}

}  // namespace erasim
