#include "erasim/net.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "erasim/error.hpp"
#include "erasim/scheme_ags.hpp"
#include "erasim/scheme_fixed.hpp"
#include "erasim/unary.hpp"

namespace erasim::net {

void encode_frame(const Frame& f, uint8_t out[kFrameSize]) {
  out[0] = static_cast<uint8_t>(f.seq >> 24);
  out[1] = static_cast<uint8_t>(f.seq >> 16);
  out[2] = static_cast<uint8_t>(f.seq >> 8);
  out[3] = static_cast<uint8_t>(f.seq);
  out[4] = f.kind;
}

Frame decode_frame(const uint8_t in[kFrameSize]) {
  Frame f;
  f.seq = (static_cast<uint32_t>(in[0]) << 24) |
          (static_cast<uint32_t>(in[1]) << 16) |
          (static_cast<uint32_t>(in[2]) << 8) | static_cast<uint32_t>(in[3]);
  f.kind = in[4];
  return f;
}

uint8_t token_kind(const ChannelToken& token) {
  if (token.is_silence()) return kKindSilence;
  if (token.is_symbol())
    return static_cast<uint8_t>(kKindSymbolBase + token.info +
                                2 * token.parity);
  fail(Errc::internal, "erasure marks are never sent by a party");
}

ChannelToken kind_token(uint8_t kind) {
  if (kind == kKindSilence) return ChannelToken::silence();
  if (kind >= kKindSymbolBase && kind < kKindSymbolBase + 4) {
    int v = kind - kKindSymbolBase;
    return ChannelToken::symbol(v & 1, v >> 1);
  }
  if (kind == kKindErasure) return ChannelToken::erasure();
  fail(Errc::protocol, "malformed frame kind " + std::to_string(kind));
}

int64_t global_timestep(const std::string& mode, Role sender, int64_t n) {
  if (mode == "4ary")
    return sender == Role::alice ? 2 * n - 1 : 2 * n;
  if (mode == "unary") {
    int64_t block = (n - 1) / kUnaryBlockSlots + 1;
    int64_t within = (n - 1) % kUnaryBlockSlots;
    int64_t global_block =
        sender == Role::alice ? 2 * block - 1 : 2 * block;
    return (global_block - 1) * kUnaryBlockSlots + within + 1;
  }
  fail(Errc::usage, "relay mode must be 4ary or unary");
}

namespace {

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Socket& operator=(Socket&& o) noexcept {
    close_fd();
    fd_ = o.fd_;
    o.fd_ = -1;
    return *this;
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close_fd(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void close_fd() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

Socket connect_to(const std::string& host, uint16_t port) {
  // The relay may come up slightly after the parties; retry briefly.
  std::string service = std::to_string(port);
  for (int attempt = 0; attempt < 100; ++attempt) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.c_str(), service.c_str(), &hints, &res) != 0)
      fail(Errc::transport, "cannot resolve host " + host);
    int fd = -1;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
      fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(res);
    if (fd >= 0) {
      set_nodelay(fd);
      return Socket(fd);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  fail(Errc::transport, "cannot connect to " + host + ":" + service);
}

// false on clean EOF before the first byte; transport error on short read.
bool read_exact(int fd, uint8_t* buf, size_t len) {
  size_t got = 0;
  while (got < len) {
    ssize_t r = ::read(fd, buf + got, len - got);
    if (r == 0) {
      if (got == 0) return false;
      fail(Errc::transport, "connection closed mid-frame");
    }
    if (r < 0) fail(Errc::transport, std::string("read: ") + std::strerror(errno));
    got += static_cast<size_t>(r);
  }
  return true;
}

void write_all(int fd, const uint8_t* buf, size_t len) {
  size_t put = 0;
  while (put < len) {
    ssize_t w = ::write(fd, buf + put, len - put);
    if (w <= 0) fail(Errc::transport, std::string("write: ") + std::strerror(errno));
    put += static_cast<size_t>(w);
  }
}

class FrameLink {
 public:
  explicit FrameLink(Socket sock) : sock_(std::move(sock)) {}

  void send(uint8_t kind) {
    Frame f{++send_seq_, kind};
    uint8_t buf[kFrameSize];
    encode_frame(f, buf);
    write_all(sock_.fd(), buf, kFrameSize);
    ++sent_;
  }

  // Returns the kind byte after validating the sequence number.
  uint8_t recv() {
    uint8_t buf[kFrameSize];
    if (!read_exact(sock_.fd(), buf, kFrameSize))
      fail(Errc::transport, "peer closed before the end-of-run marker");
    Frame f = decode_frame(buf);
    if (f.seq != recv_seq_ + 1)
      fail(Errc::protocol, "frame sequence gap: expected " +
                               std::to_string(recv_seq_ + 1) + ", got " +
                               std::to_string(f.seq));
    ++recv_seq_;
    ++received_;
    return f.kind;
  }

  int64_t sent() const { return sent_; }
  int64_t received() const { return received_; }

 private:
  Socket sock_;
  uint32_t send_seq_ = 0;
  uint32_t recv_seq_ = 0;
  int64_t sent_ = 0;
  int64_t received_ = 0;
};

constexpr int kServeRoundCap = 1 << 20;

// Token-level send/receive over the link; in unary mode one token is a
// block of four slot frames.
void send_token(FrameLink& link, SchemeId scheme, const ChannelToken& token) {
  if (scheme == SchemeId::ags1) {
    for (WireSlot s : encode_unary_block(token))
      link.send(s == WireSlot::energy ? kKindEnergy : kKindSilence);
  } else {
    link.send(token_kind(token));
  }
}

// Returns nullopt on the end-of-run marker (legal only at a token
// boundary).
std::optional<ChannelToken> recv_token(FrameLink& link, SchemeId scheme) {
  if (scheme != SchemeId::ags1) {
    uint8_t kind = link.recv();
    if (kind == kKindEndOfRun) return std::nullopt;
    return kind_token(kind);
  }
  std::vector<RecvSlot> slots;
  for (int j = 0; j < kUnaryBlockSlots; ++j) {
    uint8_t kind = link.recv();
    if (kind == kKindEndOfRun) {
      if (j == 0) return std::nullopt;
      fail(Errc::protocol, "end-of-run marker inside a unary block");
    }
    if (kind == kKindErasure)
      slots.push_back({true, WireSlot::silent});
    else if (kind == kKindEnergy)
      slots.push_back({false, WireSlot::energy});
    else if (kind == kKindSilence)
      slots.push_back({false, WireSlot::silent});
    else
      fail(Errc::protocol, "malformed unary frame kind " + std::to_string(kind));
  }
  return decode_unary_block(slots);
}

void send_end_of_run(FrameLink& link) { link.send(kKindEndOfRun); }

ServeResult finish(const FrameLink& link, const Bits& transcript,
                   int64_t sent_symbols, int64_t received_erasures) {
  ServeResult res;
  res.transcript = transcript;
  res.sent_symbols = sent_symbols;
  res.received_erasures = received_erasures;
  res.frames_sent = link.sent();
  res.frames_received = link.received();
  return res;
}

ServeResult serve_basic_alice(FrameLink& link, const Protocol& pi,
                              const Bits& x) {
  fixed::AliceState st;
  int64_t sent_symbols = 0, recv_erasures = 0;
  for (int round = 1; round <= kServeRoundCap; ++round) {
    if (!st.terminated) {
      auto [ns, tok] = fixed::alice_odd(st, pi, x);
      st = ns;
      send_token(link, SchemeId::basic4, tok);
      ++sent_symbols;
    } else {
      // Shim: a terminated party's silence is materialized explicitly so
      // the synchronous timestep structure survives the transport.
      send_token(link, SchemeId::basic4, ChannelToken::silence());
    }
    auto tok = recv_token(link, SchemeId::basic4);
    if (!tok) return finish(link, st.transcript, sent_symbols, recv_erasures);
    if (!st.terminated) {
      if (tok->is_erasure()) ++recv_erasures;
      st = fixed::alice_even(st, *tok, pi);
    }
  }
  fail(Errc::transport, "round cap exceeded; peer never finished");
}

ServeResult serve_basic_bob(FrameLink& link, const Protocol& pi,
                            const Bits& y) {
  fixed::BobState st;
  int64_t sent_symbols = 0, recv_erasures = 0;
  for (int round = 1; round <= kServeRoundCap; ++round) {
    auto tok = recv_token(link, SchemeId::basic4);
    if (!tok) fail(Errc::protocol, "unexpected end-of-run marker toward Bob");
    if (tok->is_erasure()) ++recv_erasures;
    st = fixed::bob_odd(st, *tok);
    if (st.terminated) {
      send_end_of_run(link);
      return finish(link, st.transcript, sent_symbols, recv_erasures);
    }
    auto [ns, out] = fixed::bob_even(st, pi, y);
    st = ns;
    send_token(link, SchemeId::basic4, out);
    ++sent_symbols;
  }
  fail(Errc::transport, "round cap exceeded; peer never finished");
}

ServeResult serve_ags_alice(FrameLink& link, SchemeId scheme,
                            const Protocol& pi, const Bits& x, int settle) {
  ags::AliceState st;
  int64_t sent_symbols = 0, recv_erasures = 0;
  for (int round = 1; round <= kServeRoundCap; ++round) {
    if (st.terminated) break;
    auto [ns, tok] = ags::alice_odd(st, pi, x);
    st = ns;
    send_token(link, scheme, tok);
    if (tok.is_symbol()) ++sent_symbols;
    auto rec = recv_token(link, scheme);
    if (!rec) fail(Errc::protocol, "peer ended the run while Alice was active");
    if (rec->is_erasure()) ++recv_erasures;
    st = ags::alice_even(st, *rec, pi, x);
  }
  if (!st.terminated)
    fail(Errc::transport, "round cap exceeded; peer never finished");
  for (int s = 0; s < settle; ++s) {
    send_token(link, scheme, ChannelToken::silence());
    auto rec = recv_token(link, scheme);
    if (!rec) fail(Errc::protocol, "peer ended the run during settle rounds");
    if (rec->is_symbol())
      fail(Errc::check, "semi-termination certification failed: Bob spoke "
                        "during a settle round");
  }
  send_end_of_run(link);
  return finish(link, st.transcript, sent_symbols, recv_erasures);
}

ServeResult serve_ags_bob(FrameLink& link, SchemeId scheme, const Protocol& pi,
                          const Bits& y) {
  ags::BobState st;
  int64_t sent_symbols = 0, recv_erasures = 0;
  for (int round = 1; round <= kServeRoundCap; ++round) {
    auto tok = recv_token(link, scheme);
    if (!tok) return finish(link, st.transcript, sent_symbols, recv_erasures);
    if (tok->is_erasure()) ++recv_erasures;
    st = ags::bob_odd(st, *tok, pi, y);
    auto [ns, out] = ags::bob_even(st, pi);
    st = ns;
    send_token(link, scheme, out);
    if (out.is_symbol()) ++sent_symbols;
  }
  fail(Errc::transport, "round cap exceeded; peer never finished");
}

}  // namespace

ServeResult serve_party(Role role, SchemeId scheme, const Protocol& pi,
                        const Bits& input, const std::string& host,
                        uint16_t port, int settle) {
  if (scheme != SchemeId::basic4 && scheme != SchemeId::ags4 &&
      scheme != SchemeId::ags1)
    fail(Errc::usage, "serve: scheme " + std::string(scheme_name(scheme)) +
                          " has no frame representation (use basic4, ags4, "
                          "or ags1)");
  if (!pi.normalized())
    fail(Errc::usage, "serve: protocol must be normalized");
  if (!valid_bits(input)) fail(Errc::usage, "serve: input must be over {0,1}");
  FrameLink link(connect_to(host, port));
  if (scheme == SchemeId::basic4)
    return role == Role::alice ? serve_basic_alice(link, pi, input)
                               : serve_basic_bob(link, pi, input);
  settle = settle > 0 ? settle : 3;
  return role == Role::alice
             ? serve_ags_alice(link, scheme, pi, input, settle)
             : serve_ags_bob(link, scheme, pi, input);
}

namespace {

Socket listen_on(uint16_t port, uint16_t* bound) {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) fail(Errc::transport, "socket: " + std::string(std::strerror(errno)));
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_ANY);
  addr.sin_port = htons(port);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    fail(Errc::transport, "bind " + std::to_string(port) + ": " +
                              std::strerror(errno));
  }
  if (::listen(fd, 1) != 0) {
    ::close(fd);
    fail(Errc::transport, std::string("listen: ") + std::strerror(errno));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  *bound = ntohs(addr.sin_port);
  return Socket(fd);
}

Socket accept_one(const Socket& listener) {
  int fd = ::accept(listener.fd(), nullptr, nullptr);
  if (fd < 0) fail(Errc::transport, std::string("accept: ") + std::strerror(errno));
  set_nodelay(fd);
  return Socket(fd);
}

}  // namespace

RelayStats relay(uint16_t port_a, uint16_t port_b,
                 const std::string& noise_spec, const std::string& mode,
                 const std::function<void(uint16_t, uint16_t)>& on_ready) {
  if (mode != "4ary" && mode != "unary")
    fail(Errc::usage, "relay mode must be 4ary or unary");
  if (noise_spec.rfind("adversary:", 0) == 0)
    fail(Errc::usage, "relay supports static noise specs only");
  auto noise = make_noise(noise_spec);

  RelayStats stats;
  Socket listener_a = listen_on(port_a, &stats.port_a);
  Socket listener_b = listen_on(port_b, &stats.port_b);
  if (on_ready) on_ready(stats.port_a, stats.port_b);
  Socket conn_a = accept_one(listener_a);
  Socket conn_b = accept_one(listener_b);

  std::exception_ptr pump_error;
  std::mutex error_mu;
  auto pump = [&](int from, int to, Role sender, int64_t* forwarded) {
    try {
      uint32_t expected = 0;
      while (true) {
        uint8_t buf[kFrameSize];
        if (!read_exact(from, buf, kFrameSize)) break;
        Frame f = decode_frame(buf);
        if (f.seq != expected + 1)
          fail(Errc::protocol, "relay saw a sequence gap from " +
                                   std::string(role_name(sender)));
        expected = f.seq;
        if (f.kind != kKindEndOfRun) {
          NoiseContext ctx;
          ctx.wire_timestep = global_timestep(mode, sender, f.seq);
          ctx.sender = sender;
          if (noise->decide(ctx)) {
            f.kind = kKindErasure;
            ++stats.erased;
            encode_frame(f, buf);
          }
        }
        write_all(to, buf, kFrameSize);
        ++*forwarded;
      }
      ::shutdown(to, SHUT_WR);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!pump_error) pump_error = std::current_exception();
      ::shutdown(from, SHUT_RDWR);
      ::shutdown(to, SHUT_RDWR);
    }
  };

  std::thread a_to_b(pump, conn_a.fd(), conn_b.fd(), Role::alice,
                     &stats.forwarded_alice);
  std::thread b_to_a(pump, conn_b.fd(), conn_a.fd(), Role::bob,
                     &stats.forwarded_bob);
  a_to_b.join();
  b_to_a.join();
  if (pump_error) std::rethrow_exception(pump_error);
  return stats;
}

}  // namespace erasim::net
