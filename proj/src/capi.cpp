#include "erasim.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "erasim/channel.hpp"
#include "erasim/error.hpp"
#include "erasim/net.hpp"
#include "erasim/protocol.hpp"
#include "erasim/sim.hpp"
#include "erasim/sweep.hpp"
#include "erasim/trace.hpp"
#include "erasim/verify.hpp"
#include "json.hpp"

using nlohmann::json;

struct erasim_protocol {
  erasim::Protocol impl;
};

namespace {

thread_local std::string g_last_error;

int set_error(erasim::Errc code, const std::string& what) {
  g_last_error = what;
  return static_cast<int>(code);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int deliver(char** slot, const std::string& value) {
  if (!slot) return ERASIM_OK;
  *slot = dup_string(value);
  if (!*slot) return set_error(erasim::Errc::internal, "out of memory");
  return ERASIM_OK;
}

// Runs `fn`, translating exceptions into error codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const erasim::Error& e) {
    return set_error(e.code(), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(erasim::Errc::internal, "out of memory");
  } catch (const std::exception& e) {
    return set_error(erasim::Errc::internal, e.what());
  }
}

int require(bool ok, const char* what) {
  if (ok) return ERASIM_OK;
  return set_error(erasim::Errc::usage, what);
}

json serve_result_json(const erasim::net::ServeResult& r) {
  json j;
  j["transcript"] = r.transcript;
  j["sent_symbols"] = r.sent_symbols;
  j["received_erasures"] = r.received_erasures;
  j["frames_sent"] = r.frames_sent;
  j["frames_received"] = r.frames_received;
  return j;
}

}  // namespace

extern "C" {

int erasim_protocol_string_exchange(uint32_t n_bits, erasim_protocol** out) {
  if (int rc = require(out != nullptr, "out must not be null")) return rc;
  return guarded([&] {
    auto* p = new erasim_protocol{
        erasim::Protocol::string_exchange(static_cast<int>(n_bits))};
    *out = p;
    return ERASIM_OK;
  });
}

int erasim_protocol_from_table_file(const char* path, erasim_protocol** out) {
  if (int rc = require(out && path, "path and out must not be null")) return rc;
  return guarded([&] {
    auto* p = new erasim_protocol{erasim::Protocol::from_table_file(path)};
    *out = p;
    return ERASIM_OK;
  });
}

int erasim_protocol_from_spec(const char* spec, erasim_protocol** out) {
  if (int rc = require(out && spec, "spec and out must not be null")) return rc;
  return guarded([&] {
    auto* p = new erasim_protocol{erasim::Protocol::from_spec(spec)};
    *out = p;
    return ERASIM_OK;
  });
}

void erasim_protocol_free(erasim_protocol* p) { delete p; }

uint32_t erasim_protocol_length(const erasim_protocol* p) {
  return p ? static_cast<uint32_t>(p->impl.length()) : 0;
}

int erasim_run(const char* scheme, const erasim_protocol* p, const char* x,
               const char* y, const char* noise_spec, uint32_t max_rounds,
               uint32_t settle, const char* trace_path, char** result_json) {
  if (int rc = require(scheme && p && x && y, "scheme, protocol, and inputs "
                                              "must not be null"))
    return rc;
  return guarded([&]() -> int {
    erasim::RunConfig cfg;
    cfg.scheme = erasim::parse_scheme(scheme);
    cfg.protocol = &p->impl;
    cfg.x = x;
    cfg.y = y;
    auto noise = erasim::make_noise(noise_spec ? noise_spec : "none");
    cfg.noise = noise.get();
    cfg.max_rounds = max_rounds;
    cfg.settle_rounds = settle > 0 ? static_cast<int>(settle) : 3;
    erasim::RunResult r = erasim::run(cfg);
    if (trace_path && *trace_path)
      erasim::write_trace_file(r.trace, trace_path);
    erasim::VerifyReport report = erasim::verify_trace(r.trace);

    json out;
    out["outputs"] = {{"alice", r.output_a}, {"bob", r.output_b}};
    out["metrics"] = json::parse(erasim::metrics_to_json(r.metrics));
    out["verify"] = json::parse(report.to_json());
    if (r.aborted) out["abort_reason"] = r.abort_reason;
    if (int rc = deliver(result_json, out.dump())) return rc;
    if (r.aborted) return set_error(erasim::Errc::limit, r.abort_reason);
    if (!report.ok())
      return set_error(erasim::Errc::check, "a run check failed");
    return ERASIM_OK;
  });
}

int erasim_verify_trace_file(const char* path, char** report_json) {
  if (int rc = require(path != nullptr, "path must not be null")) return rc;
  return guarded([&]() -> int {
    erasim::RunTrace trace = erasim::read_trace_file(path);
    erasim::VerifyReport report = erasim::verify_trace(trace);
    if (int rc = deliver(report_json, report.to_json())) return rc;
    if (!report.ok())
      return set_error(erasim::Errc::check, "a trace check failed");
    return ERASIM_OK;
  });
}

int erasim_sweep_budget(const char* scheme, const erasim_protocol* p,
                        const char* x, const char* y, uint32_t t_max,
                        char** csv) {
  if (int rc = require(scheme && p && x && y && csv, "null argument"))
    return rc;
  return guarded([&]() -> int {
    auto rows = erasim::sweep_budget(erasim::parse_scheme(scheme), p->impl, x,
                                     y, t_max);
    return deliver(csv, erasim::sweep_to_csv(rows, false));
  });
}

int erasim_sweep_delta(const char* scheme, const erasim_protocol* p,
                       const char* x, const char* y, const double* deltas,
                       size_t n_deltas, char** csv) {
  if (int rc = require(scheme && p && x && y && csv && (deltas || !n_deltas),
                       "null argument"))
    return rc;
  return guarded([&]() -> int {
    std::vector<double> ds(deltas, deltas + n_deltas);
    auto rows =
        erasim::sweep_delta(erasim::parse_scheme(scheme), p->impl, x, y, ds);
    return deliver(csv, erasim::sweep_to_csv(rows, true));
  });
}

int erasim_unsync_demo(const erasim_protocol* p, const char* x, const char* y,
                       uint32_t gap, char** result_json) {
  if (int rc = require(p && x && y, "null argument")) return rc;
  return guarded([&]() -> int {
    erasim::UnsyncDemo demo = erasim::unsync_termination_demo(
        p->impl, x, y, static_cast<int>(gap));
    json out;
    out["pattern"] = json::array();
    for (int64_t t : demo.pattern.erased) out["pattern"].push_back(t);
    out["t_a"] = demo.result.metrics.t_a;
    out["t_b"] = demo.result.metrics.t_b;
    out["gap"] = demo.gap;
    out["erasures"] = demo.erasures;
    return deliver(result_json, out.dump());
  });
}

int erasim_serve_party(const char* role, const char* scheme,
                       const erasim_protocol* p, const char* input,
                       const char* host, uint16_t port, uint32_t settle,
                       char** result_json) {
  if (int rc = require(role && scheme && p && input && host, "null argument"))
    return rc;
  return guarded([&]() -> int {
    erasim::Role r;
    std::string role_s = role;
    if (role_s == "alice")
      r = erasim::Role::alice;
    else if (role_s == "bob")
      r = erasim::Role::bob;
    else
      return set_error(erasim::Errc::usage, "role must be alice or bob");
    erasim::net::ServeResult res = erasim::net::serve_party(
        r, erasim::parse_scheme(scheme), p->impl, input, host, port,
        static_cast<int>(settle));
    return deliver(result_json, serve_result_json(res).dump());
  });
}

int erasim_relay(uint16_t port_a, uint16_t port_b, const char* noise_spec,
                 const char* mode, int print_ready, char** stats_json) {
  return guarded([&]() -> int {
    auto on_ready = [print_ready](uint16_t a, uint16_t b) {
      if (print_ready) {
        std::printf("READY %u %u\n", a, b);
        std::fflush(stdout);
      }
    };
    erasim::net::RelayStats stats = erasim::net::relay(
        port_a, port_b, noise_spec ? noise_spec : "none",
        mode ? mode : "4ary", on_ready);
    json out;
    out["forwarded"] = {{"alice", stats.forwarded_alice},
                        {"bob", stats.forwarded_bob}};
    out["erased"] = stats.erased;
    out["port_a"] = stats.port_a;
    out["port_b"] = stats.port_b;
    return deliver(stats_json, out.dump());
  });
}

const char* erasim_last_error(void) { return g_last_error.c_str(); }

void erasim_string_free(char* s) { ::free(s); }

}  // extern "C"
