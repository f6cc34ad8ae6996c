#include "erasim/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <future>
#include <mutex>
#include <thread>

#include "doctest.h"
#include "erasim/error.hpp"
#include "erasim/sim.hpp"

using namespace erasim;

namespace {

struct NetRun {
  net::ServeResult alice;
  net::ServeResult bob;
  net::RelayStats stats;
};

// Relay plus both parties on loopback, each in its own thread.
NetRun net_run(SchemeId scheme, const Protocol& pi, const Bits& x,
               const Bits& y, const std::string& noise_spec) {
  std::mutex mu;
  std::condition_variable cv;
  uint16_t port_a = 0, port_b = 0;
  bool ready = false;

  auto relay_fut = std::async(std::launch::async, [&] {
    return net::relay(0, 0, noise_spec,
                      scheme == SchemeId::ags1 ? "unary" : "4ary",
                      [&](uint16_t a, uint16_t b) {
                        std::lock_guard<std::mutex> lock(mu);
                        port_a = a;
                        port_b = b;
                        ready = true;
                        cv.notify_all();
                      });
  });
  {
    std::unique_lock<std::mutex> lock(mu);
    cv.wait(lock, [&] { return ready; });
  }
  auto alice_fut = std::async(std::launch::async, [&] {
    return net::serve_party(Role::alice, scheme, pi, x, "127.0.0.1", port_a, 3);
  });
  auto bob_fut = std::async(std::launch::async, [&] {
    return net::serve_party(Role::bob, scheme, pi, y, "127.0.0.1", port_b, 3);
  });
  NetRun out;
  out.alice = alice_fut.get();
  out.bob = bob_fut.get();
  out.stats = relay_fut.get();
  return out;
}

RunResult sim_run(SchemeId scheme, const Protocol& pi, const Bits& x,
                  const Bits& y, const std::string& noise_spec) {
  auto noise = make_noise(noise_spec);
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.protocol = &pi;
  cfg.x = x;
  cfg.y = y;
  cfg.noise = noise.get();
  cfg.collect_trace = false;
  return run(cfg);
}

}  // namespace

TEST_CASE("frame bytes round-trip") {
  net::Frame f{0x01020304, net::kKindEnergy};
  uint8_t buf[net::kFrameSize];
  net::encode_frame(f, buf);
  CHECK(buf[0] == 0x01);
  CHECK(buf[3] == 0x04);
  net::Frame g = net::decode_frame(buf);
  CHECK(g.seq == f.seq);
  CHECK(g.kind == f.kind);
}

TEST_CASE("token/kind mapping covers the 4-ary alphabet") {
  CHECK(net::token_kind(ChannelToken::silence()) == net::kKindSilence);
  CHECK(net::token_kind(ChannelToken::symbol(0, 0)) == 0x01);
  CHECK(net::token_kind(ChannelToken::symbol(1, 0)) == 0x02);
  CHECK(net::token_kind(ChannelToken::symbol(0, 1)) == 0x03);
  CHECK(net::token_kind(ChannelToken::symbol(1, 1)) == 0x04);
  for (uint8_t k = 0x00; k <= 0x04; ++k)
    CHECK(net::token_kind(net::kind_token(k)) == k);
  CHECK(net::kind_token(net::kKindErasure) == ChannelToken::erasure());
  CHECK_THROWS_AS(net::kind_token(0x77), Error);
}

TEST_CASE("per-direction frame numbers map onto global timesteps") {
  CHECK(net::global_timestep("4ary", Role::alice, 1) == 1);
  CHECK(net::global_timestep("4ary", Role::bob, 1) == 2);
  CHECK(net::global_timestep("4ary", Role::alice, 3) == 5);
  // unary: Alice owns blocks 1,3,5...; Bob 2,4,6...
  CHECK(net::global_timestep("unary", Role::alice, 1) == 1);
  CHECK(net::global_timestep("unary", Role::alice, 4) == 4);
  CHECK(net::global_timestep("unary", Role::alice, 5) == 9);
  CHECK(net::global_timestep("unary", Role::bob, 1) == 5);
  CHECK(net::global_timestep("unary", Role::bob, 4) == 8);
  CHECK(net::global_timestep("unary", Role::bob, 5) == 13);
  CHECK_THROWS_AS(net::global_timestep("binary", Role::alice, 1), Error);
}

TEST_CASE("net run matches the in-process simulator without noise") {
  Protocol pi = Protocol::string_exchange(6);
  NetRun net = net_run(SchemeId::basic4, pi, "101", "110", "none");
  RunResult sim = sim_run(SchemeId::basic4, pi, "101", "110", "none");
  CHECK(net.alice.transcript == sim.output_a);
  CHECK(net.bob.transcript == sim.output_b);
  CHECK(net.alice.sent_symbols + net.bob.sent_symbols ==
        sim.metrics.transmissions);
  CHECK(net.stats.erased == sim.metrics.erasures_counted);
}

TEST_CASE("net run matches the simulator under a static pattern") {
  Protocol pi = Protocol::string_exchange(6);
  NetRun net = net_run(SchemeId::basic4, pi, "101", "110", "list:2");
  RunResult sim = sim_run(SchemeId::basic4, pi, "101", "110", "list:2");
  CHECK(net.alice.transcript == sim.output_a);
  CHECK(net.bob.transcript == sim.output_b);
  CHECK(net.alice.sent_symbols + net.bob.sent_symbols ==
        sim.metrics.transmissions);
  CHECK(net.stats.erased == sim.metrics.erasures_counted);
  CHECK(net.alice.received_erasures + net.bob.received_erasures ==
        sim.metrics.erasure_marks);
}

TEST_CASE("unary frames erased by the relay decode as erased slots") {
  Protocol pi = Protocol::string_exchange(4);
  NetRun net = net_run(SchemeId::ags1, pi, "10", "01", "list:2,11");
  RunResult sim = sim_run(SchemeId::ags1, pi, "10", "01", "list:2,11");
  CHECK(net.alice.transcript == sim.output_a);
  CHECK(net.bob.transcript == sim.output_b);
  CHECK(net.alice.sent_symbols + net.bob.sent_symbols == sim.metrics.cc_sym);
  CHECK(net.stats.erased == sim.metrics.erasures_counted);
}

TEST_CASE("pass-through relay forwards every frame untouched") {
  Protocol pi = Protocol::string_exchange(4);
  NetRun net = net_run(SchemeId::ags4, pi, "10", "01", "none");
  CHECK(net.stats.erased == 0);
  CHECK(net.stats.forwarded_alice > 0);
  CHECK(net.stats.forwarded_bob > 0);
}

TEST_CASE("a frame with the wrong sequence number is a protocol violation") {
  // Hand-rolled fake relay that replies out of sequence.
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(listener >= 0);
  int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  REQUIRE(::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  REQUIRE(::listen(listener, 1) == 0);
  socklen_t len = sizeof(addr);
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  uint16_t port = ntohs(addr.sin_port);

  std::thread fake([&] {
    int conn = ::accept(listener, nullptr, nullptr);
    if (conn < 0) return;
    uint8_t buf[net::kFrameSize];
    size_t got = 0;
    while (got < net::kFrameSize) {
      ssize_t r = ::read(conn, buf + got, net::kFrameSize - got);
      if (r <= 0) break;
      got += static_cast<size_t>(r);
    }
    net::Frame bad{999, net::kKindSilence};
    net::encode_frame(bad, buf);
    (void)!::write(conn, buf, net::kFrameSize);
    ::close(conn);
  });

  Protocol pi = Protocol::string_exchange(4);
  bool threw = false;
  try {
    net::serve_party(Role::alice, SchemeId::basic4, pi, "10", "127.0.0.1",
                     port, 3);
  } catch (const Error& e) {
    threw = true;
    CHECK(e.code() == Errc::protocol);
  }
  CHECK(threw);
  fake.join();
  ::close(listener);
}

TEST_CASE("serve rejects schemes without a frame representation") {
  Protocol pi = Protocol::string_exchange(4);
  CHECK_THROWS_AS(net::serve_party(Role::alice, SchemeId::basic2, pi, "10",
                                   "127.0.0.1", 1, 3),
                  Error);
  CHECK_THROWS_AS(net::serve_party(Role::alice, SchemeId::ecc3, pi, "10",
                                   "127.0.0.1", 1, 3),
                  Error);
}

TEST_CASE("relay rejects adversarial noise and bad modes") {
  CHECK_THROWS_AS(net::relay(0, 0, "adversary:greedy,budget=3", "4ary"),
                  Error);
  CHECK_THROWS_AS(net::relay(0, 0, "none", "8ary"), Error);
}
