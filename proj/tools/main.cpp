// erasim command-line driver. Talks to the core exclusively through the
// public C API.
//
// Exit codes: 0 success, 1 an invariant/bound/certification failed,
// 2 usage or I/O trouble (including transport and framing errors).

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "erasim.h"

namespace {

int exit_code_for(int rc) {
  if (rc == ERASIM_OK) return 0;
  if (rc == ERASIM_ERR_CHECK) return 1;
  return 2;
}

void print_error(int rc) {
  std::fprintf(stderr, "erasim: error %d: %s\n", rc, erasim_last_error());
}

struct ProtocolHandle {
  erasim_protocol* p = nullptr;
  ~ProtocolHandle() { erasim_protocol_free(p); }
};

struct StringOut {
  char* s = nullptr;
  ~StringOut() { erasim_string_free(s); }
};

int load_protocol(const std::string& spec, ProtocolHandle& out) {
  int rc = erasim_protocol_from_spec(spec.c_str(), &out.p);
  if (rc != ERASIM_OK) print_error(rc);
  return rc;
}

// Flattens the run result JSON into one CSV row for --out csv.
std::string metrics_csv(const std::string& result_json) {
  // Tiny extraction by key; the metrics object is flat and stable.
  auto grab = [&](const std::string& key) -> std::string {
    std::string needle = "\"" + key + "\":";
    auto pos = result_json.find(needle);
    if (pos == std::string::npos) return "";
    pos += needle.size();
    auto end = result_json.find_first_of(",}", pos);
    return result_json.substr(pos, end - pos);
  };
  static const char* fields[] = {"t_a",          "t_b",
                                 "transmissions", "cc_sym",
                                 "cc_bits",       "rc_timesteps",
                                 "erasures_counted", "erasure_marks"};
  std::string header, row;
  for (const char* f : fields) {
    if (!header.empty()) {
      header += ",";
      row += ",";
    }
    header += f;
    row += grab(f);
  }
  return header + "\n" + row + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-party interactive coding over erasure channels"};
  app.require_subcommand(1);

  // ---- run ----
  auto* run = app.add_subcommand("run", "simulate one protocol run");
  std::string run_scheme = "basic4", run_protocol, run_x, run_y,
              run_noise = "none", run_out = "json", run_trace;
  uint32_t run_max_rounds = 0, run_settle = 0;
  run->add_option("--scheme", run_scheme, "basic4|basic2|ecc3|ags4|ags1");
  run->add_option("--protocol", run_protocol,
                  "builtin:string-exchange:N or a table JSON file")
      ->required();
  run->add_option("--x", run_x, "Alice's input bits")->required();
  run->add_option("--y", run_y, "Bob's input bits")->required();
  run->add_option("--noise", run_noise, "noise spec (default none)");
  run->add_option("--out", run_out, "json|csv");
  run->add_option("--trace", run_trace, "write a JSON-lines trace here");
  run->add_option("--max-rounds", run_max_rounds, "safety cap (0 = auto)");
  run->add_option("--settle", run_settle,
                  "silent settle rounds for AGS schemes (default 3)");

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "worst-case noise sweep (CSV)");
  std::string sw_scheme = "basic4", sw_protocol, sw_x, sw_y, sw_deltas;
  int64_t sw_tmax = -1;
  sweep->add_option("--scheme", sw_scheme, "basic4|basic2|ecc3|ags4|ags1");
  sweep->add_option("--protocol", sw_protocol, "protocol spec")->required();
  sweep->add_option("--x", sw_x, "Alice's input bits")->required();
  sweep->add_option("--y", sw_y, "Bob's input bits")->required();
  sweep->add_option("--t-max", sw_tmax, "sweep budgets T = 0..t_max");
  sweep->add_option("--deltas", sw_deltas,
                    "comma-separated noise fractions in [0,0.5)");

  // ---- verify ----
  auto* verify = app.add_subcommand("verify", "re-check a trace file");
  std::string vf_trace;
  bool vf_json = false;
  verify->add_option("trace", vf_trace, "JSON-lines trace file")->required();
  verify->add_flag("--json", vf_json, "print the raw report JSON");

  // ---- unsync ----
  auto* unsync = app.add_subcommand(
      "unsync", "build a noise pattern splitting the termination rounds");
  std::string un_protocol, un_x, un_y;
  uint32_t un_gap = 1;
  unsync->add_option("--protocol", un_protocol, "protocol spec")->required();
  unsync->add_option("--x", un_x, "Alice's input bits")->required();
  unsync->add_option("--y", un_y, "Bob's input bits")->required();
  unsync->add_option("--gap", un_gap, "t_B - t_A to demonstrate")->required();

  // ---- serve ----
  auto* serve = app.add_subcommand("serve", "run one party over TCP");
  std::string sv_role, sv_scheme = "basic4", sv_protocol, sv_input, sv_connect;
  uint32_t sv_settle = 0;
  serve->add_option("--role", sv_role, "alice|bob")->required();
  serve->add_option("--scheme", sv_scheme, "basic4|ags4|ags1");
  serve->add_option("--protocol", sv_protocol, "protocol spec")->required();
  serve->add_option("--input", sv_input, "this party's input bits")->required();
  serve->add_option("--connect", sv_connect, "relay HOST:PORT")->required();
  serve->add_option("--settle", sv_settle, "AGS settle rounds (default 3)");

  // ---- relay ----
  auto* relay = app.add_subcommand("relay", "erasure-injecting relay");
  uint16_t rl_a = 0, rl_b = 0;
  std::string rl_noise = "none", rl_mode = "4ary";
  bool rl_ready = false;
  relay->add_option("--a", rl_a, "listen port for Alice (0 = ephemeral)")
      ->required();
  relay->add_option("--b", rl_b, "listen port for Bob (0 = ephemeral)")
      ->required();
  relay->add_option("--noise", rl_noise, "static noise spec");
  relay->add_option("--mode", rl_mode, "4ary|unary timestep mapping");
  relay->add_flag("--print-ready", rl_ready,
                  "print READY <port_a> <port_b> once listening");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    if (run_out != "json" && run_out != "csv") {
      std::fprintf(stderr, "erasim: --out must be json or csv\n");
      return 2;
    }
    ProtocolHandle p;
    if (int rc = load_protocol(run_protocol, p)) return exit_code_for(rc);
    StringOut result;
    int rc = erasim_run(run_scheme.c_str(), p.p, run_x.c_str(), run_y.c_str(),
                        run_noise.c_str(), run_max_rounds, run_settle,
                        run_trace.empty() ? nullptr : run_trace.c_str(),
                        &result.s);
    if (result.s) {
      if (run_out == "json")
        std::printf("%s\n", result.s);
      else
        std::fputs(metrics_csv(result.s).c_str(), stdout);
    }
    if (rc != ERASIM_OK) print_error(rc);
    return exit_code_for(rc);
  }

  if (sweep->parsed()) {
    if ((sw_tmax < 0) == sw_deltas.empty()) {
      std::fprintf(stderr, "erasim: pass exactly one of --t-max, --deltas\n");
      return 2;
    }
    ProtocolHandle p;
    if (int rc = load_protocol(sw_protocol, p)) return exit_code_for(rc);
    StringOut csv;
    int rc;
    if (sw_tmax >= 0) {
      rc = erasim_sweep_budget(sw_scheme.c_str(), p.p, sw_x.c_str(),
                               sw_y.c_str(), static_cast<uint32_t>(sw_tmax),
                               &csv.s);
    } else {
      std::vector<double> ds;
      std::string item;
      for (char c : sw_deltas + ",") {
        if (c == ',') {
          if (!item.empty()) {
            try {
              ds.push_back(std::stod(item));
            } catch (const std::exception&) {
              std::fprintf(stderr, "erasim: bad delta '%s'\n", item.c_str());
              return 2;
            }
          }
          item.clear();
        } else {
          item.push_back(c);
        }
      }
      rc = erasim_sweep_delta(sw_scheme.c_str(), p.p, sw_x.c_str(),
                              sw_y.c_str(), ds.data(), ds.size(), &csv.s);
    }
    if (csv.s) std::fputs(csv.s, stdout);
    if (rc != ERASIM_OK) print_error(rc);
    return exit_code_for(rc);
  }

  if (verify->parsed()) {
    StringOut report;
    int rc = erasim_verify_trace_file(vf_trace.c_str(), &report.s);
    if (report.s) {
      if (vf_json) {
        std::printf("%s\n", report.s);
      } else {
        // Render the JSON report as PASS/FAIL lines.
        std::string text = report.s;
        size_t pos = 0;
        while ((pos = text.find("{\"description\"", pos)) != std::string::npos) {
          auto id_pos = text.find("\"id\":\"", pos);
          auto id_end = text.find('"', id_pos + 6);
          std::string id = text.substr(id_pos + 6, id_end - id_pos - 6);
          bool pass = text.find("\"pass\":true", pos) < text.find('}', pos);
          std::printf("%s %s\n", pass ? "PASS" : "FAIL", id.c_str());
          pos = id_end;
        }
        std::printf("%s\n", rc == ERASIM_OK ? "OK" : "FAILED");
      }
    }
    if (rc != ERASIM_OK && rc != ERASIM_ERR_CHECK) print_error(rc);
    return exit_code_for(rc);
  }

  if (unsync->parsed()) {
    ProtocolHandle p;
    if (int rc = load_protocol(un_protocol, p)) return exit_code_for(rc);
    StringOut result;
    int rc = erasim_unsync_demo(p.p, un_x.c_str(), un_y.c_str(), un_gap,
                                &result.s);
    if (result.s) std::printf("%s\n", result.s);
    if (rc != ERASIM_OK) print_error(rc);
    return exit_code_for(rc);
  }

  if (serve->parsed()) {
    auto colon = sv_connect.rfind(':');
    if (colon == std::string::npos) {
      std::fprintf(stderr, "erasim: --connect needs HOST:PORT\n");
      return 2;
    }
    std::string host = sv_connect.substr(0, colon);
    int port = 0;
    try {
      port = std::stoi(sv_connect.substr(colon + 1));
    } catch (const std::exception&) {
      port = -1;
    }
    if (port <= 0 || port > 65535) {
      std::fprintf(stderr, "erasim: bad port in --connect\n");
      return 2;
    }
    ProtocolHandle p;
    if (int rc = load_protocol(sv_protocol, p)) return exit_code_for(rc);
    StringOut result;
    int rc = erasim_serve_party(sv_role.c_str(), sv_scheme.c_str(), p.p,
                                sv_input.c_str(), host.c_str(),
                                static_cast<uint16_t>(port), sv_settle,
                                &result.s);
    if (result.s) std::printf("%s\n", result.s);
    if (rc != ERASIM_OK) print_error(rc);
    return exit_code_for(rc);
  }

  if (relay->parsed()) {
    StringOut stats;
    int rc = erasim_relay(rl_a, rl_b, rl_noise.c_str(), rl_mode.c_str(),
                          rl_ready ? 1 : 0, &stats.s);
    if (stats.s) std::printf("%s\n", stats.s);
    if (rc != ERASIM_OK) print_error(rc);
    return exit_code_for(rc);
  }

  return 2;
}
