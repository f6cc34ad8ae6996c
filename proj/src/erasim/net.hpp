#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "erasim/channel.hpp"
#include "erasim/protocol.hpp"
#include "erasim/trace.hpp"

namespace erasim::net {

// Wire frame: 4-byte big-endian per-direction sequence number (1-based,
// incremented by one per frame a party sends) followed by one kind byte.
// Parties never send the erasure kind; the relay rewrites the kind byte of
// an erased frame and drops the payload content with it.
inline constexpr size_t kFrameSize = 5;
inline constexpr uint8_t kKindSilence = 0x00;
inline constexpr uint8_t kKindSymbolBase = 0x01;  // 0x01..0x04: info + 2*parity + 1
inline constexpr uint8_t kKindEnergy = 0x05;      // unary mode slot
inline constexpr uint8_t kKindErasure = 0xFE;
inline constexpr uint8_t kKindEndOfRun = 0xFF;

struct Frame {
  uint32_t seq = 0;
  uint8_t kind = kKindSilence;
};

void encode_frame(const Frame& f, uint8_t out[kFrameSize]);
Frame decode_frame(const uint8_t in[kFrameSize]);

uint8_t token_kind(const ChannelToken& token);       // 4-ary tokens
ChannelToken kind_token(uint8_t kind);               // rejects 0xFE/0xFF

struct ServeResult {
  Bits transcript;
  int64_t sent_symbols = 0;       // non-silent tokens this party sent
  int64_t received_erasures = 0;  // erasure marks decoded while listening
  int64_t frames_sent = 0;
  int64_t frames_received = 0;
};

// Runs one party of the scheme against a relay at host:port, in lockstep:
// each side blocks for the frame with the next expected sequence number
// before stepping. Supports the schemes whose tokens the frame format can
// carry: basic4, ags4, and ags1 (one frame per unary slot). A terminated
// party keeps materializing silence frames until the end-of-run marker
// travels; for AGS schemes Alice appends `settle` silent rounds and then
// sends the marker herself.
ServeResult serve_party(Role role, SchemeId scheme, const Protocol& pi,
                        const Bits& input, const std::string& host,
                        uint16_t port, int settle);

struct RelayStats {
  int64_t forwarded_alice = 0;  // frames Alice -> Bob
  int64_t forwarded_bob = 0;    // frames Bob -> Alice
  int64_t erased = 0;
  uint16_t port_a = 0;
  uint16_t port_b = 0;
};

// Forwards frames between the two parties, rewriting the kind byte to the
// erasure mark at every scheduled global timestep. Frames are never
// reordered, duplicated, or dropped; the end-of-run marker is never
// erased (noise after both sides are done cannot affect the run). mode
// ("4ary" or "unary") fixes how per-direction sequence numbers map to
// global timesteps. Only static noise specs are accepted. on_ready, if
// set, fires with the bound ports before any connection is accepted.
RelayStats relay(uint16_t port_a, uint16_t port_b,
                 const std::string& noise_spec, const std::string& mode,
                 const std::function<void(uint16_t, uint16_t)>& on_ready = {});

// Global wire timestep of a party's n-th frame under the given mode.
int64_t global_timestep(const std::string& mode, Role sender, int64_t n);

}  // namespace erasim::net
