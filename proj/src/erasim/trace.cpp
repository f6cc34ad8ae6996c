#include "erasim/trace.hpp"

#include <fstream>
#include <sstream>

#include "erasim/error.hpp"
#include "json.hpp"

namespace erasim {

using nlohmann::json;

SchemeId parse_scheme(const std::string& name) {
  if (name == "basic4") return SchemeId::basic4;
  if (name == "basic2") return SchemeId::basic2;
  if (name == "ecc3") return SchemeId::ecc3;
  if (name == "ags4") return SchemeId::ags4;
  if (name == "ags1") return SchemeId::ags1;
  fail(Errc::usage, "unknown scheme: " + name +
                        " (expected basic4|basic2|ecc3|ags4|ags1)");
}

const char* scheme_name(SchemeId s) {
  switch (s) {
    case SchemeId::basic4: return "basic4";
    case SchemeId::basic2: return "basic2";
    case SchemeId::ecc3: return "ecc3";
    case SchemeId::ags4: return "ags4";
    case SchemeId::ags1: return "ags1";
  }
  fail(Errc::internal, "bad scheme id");
}

bool is_ags(SchemeId s) {
  return s == SchemeId::ags4 || s == SchemeId::ags1;
}

int slots_per_token(SchemeId s) {
  switch (s) {
    case SchemeId::basic4:
    case SchemeId::ags4: return 1;
    case SchemeId::basic2: return 2;
    case SchemeId::ecc3: return 3;
    case SchemeId::ags1: return 4;
  }
  fail(Errc::internal, "bad scheme id");
}

int bits_per_symbol(SchemeId s) {
  switch (s) {
    case SchemeId::basic4:
    case SchemeId::ags4:
    case SchemeId::basic2: return 2;
    case SchemeId::ecc3: return 3;
    case SchemeId::ags1: return 1;
  }
  fail(Errc::internal, "bad scheme id");
}

namespace {

json snapshot_to_json(const PartySnapshot& p, bool ags, bool bob) {
  json j;
  j["r"] = p.round;
  j["tr"] = p.transcript;
  if (!ags || !bob) j["done"] = p.terminated;
  if (!ags && bob) j["err"] = p.err;
  if (ags && bob) j["term_phase"] = p.termination_phase;
  if (ags) j["last"] = p.last_received.str();
  return j;
}

PartySnapshot snapshot_from_json(const json& j) {
  PartySnapshot p;
  p.round = j.at("r").get<int>();
  p.transcript = j.at("tr").get<std::string>();
  if (j.contains("done")) p.terminated = j["done"].get<bool>();
  if (j.contains("err")) p.err = j["err"].get<bool>();
  if (j.contains("term_phase"))
    p.termination_phase = j["term_phase"].get<int>();
  if (j.contains("last"))
    p.last_received = ChannelToken::parse(j["last"].get<std::string>());
  return p;
}

json step_to_json(const StepRecord& s, bool ags) {
  json j;
  j["type"] = "step";
  j["t"] = s.timestep;
  j["round"] = s.round;
  if (s.settle) j["settle"] = true;
  j["sender"] = s.sender == Role::alice ? "A" : "B";
  j["sent"] = s.sent.str();
  if (s.injected) j["injected"] = true;
  if (!s.wire_sent.empty()) {
    j["wire_sent"] = s.wire_sent;
    j["wire_recv"] = s.wire_recv;
  }
  j["erased"] = s.erased_slots;
  j["received"] = s.received.str();
  j["alice"] = snapshot_to_json(s.alice, ags, false);
  j["bob"] = snapshot_to_json(s.bob, ags, true);
  j["costs"] = {{"a", s.costs.alice_sent},
                {"b", s.costs.bob_sent},
                {"ch", s.costs.erasures_received}};
  return j;
}

StepRecord step_from_json(const json& j) {
  StepRecord s;
  s.timestep = j.at("t").get<int>();
  s.round = j.at("round").get<int>();
  s.settle = j.value("settle", false);
  std::string sender = j.at("sender").get<std::string>();
  if (sender != "A" && sender != "B")
    fail(Errc::usage, "trace: bad sender " + sender);
  s.sender = sender == "A" ? Role::alice : Role::bob;
  s.sent = ChannelToken::parse(j.at("sent").get<std::string>());
  s.injected = j.value("injected", false);
  s.wire_sent = j.value("wire_sent", std::string());
  s.wire_recv = j.value("wire_recv", std::string());
  s.erased_slots = j.at("erased").get<int>();
  s.received = ChannelToken::parse(j.at("received").get<std::string>());
  s.alice = snapshot_from_json(j.at("alice"));
  s.bob = snapshot_from_json(j.at("bob"));
  const json& c = j.at("costs");
  s.costs.alice_sent = c.at("a").get<int64_t>();
  s.costs.bob_sent = c.at("b").get<int64_t>();
  s.costs.erasures_received = c.at("ch").get<int64_t>();
  return s;
}

json metrics_to_json_obj(const Metrics& m) {
  json j;
  j["t_a"] = m.t_a;
  j["t_b"] = m.t_b;
  j["semi_termination"] = m.semi_termination;
  j["transmissions"] = m.transmissions;
  j["cc_sym"] = m.cc_sym;
  j["cc_bits"] = m.cc_bits;
  j["rc_timesteps"] = m.rc_timesteps;
  j["rounds_total"] = m.rounds_total;
  j["erasures_counted"] = m.erasures_counted;
  j["erasure_marks"] = m.erasure_marks;
  return j;
}

Metrics metrics_from_json(const json& j) {
  Metrics m;
  m.t_a = j.at("t_a").get<int>();
  m.t_b = j.at("t_b").get<int>();
  m.semi_termination = j.at("semi_termination").get<bool>();
  m.transmissions = j.at("transmissions").get<int64_t>();
  m.cc_sym = j.at("cc_sym").get<int64_t>();
  m.cc_bits = j.at("cc_bits").get<int64_t>();
  m.rc_timesteps = j.at("rc_timesteps").get<int64_t>();
  m.rounds_total = j.at("rounds_total").get<int>();
  m.erasures_counted = j.at("erasures_counted").get<int64_t>();
  m.erasure_marks = j.at("erasure_marks").get<int64_t>();
  return m;
}

}  // namespace

std::string metrics_to_json(const Metrics& m) {
  return metrics_to_json_obj(m).dump();
}

std::string trace_to_jsonl(const RunTrace& trace) {
  std::ostringstream out;
  json header;
  header["type"] = "header";
  header["format"] = 1;
  header["scheme"] = scheme_name(trace.scheme);
  header["n"] = trace.n;
  header["x"] = trace.x;
  header["y"] = trace.y;
  header["reference"] = trace.reference;
  header["settle_rounds"] = trace.settle_rounds;
  header["noise"] = trace.noise_spec;
  header["max_rounds"] = trace.max_rounds;
  out << header.dump() << "\n";
  bool ags = is_ags(trace.scheme);
  int phase_switch_emitted = 0;
  for (const StepRecord& s : trace.steps) {
    out << step_to_json(s, ags).dump() << "\n";
    if (ags && !phase_switch_emitted && trace.bob_phase_switch_round == s.round &&
        s.sender == Role::bob) {
      json ev = {{"type", "event"},
                 {"round", s.round},
                 {"what", "bob-termination-phase"}};
      out << ev.dump() << "\n";
      phase_switch_emitted = 1;
    }
    if (trace.alice_terminated_round == s.round && s.sender == Role::bob &&
        !s.settle) {
      json ev = {{"type", "event"},
                 {"round", s.round},
                 {"what", "alice-terminated"}};
      out << ev.dump() << "\n";
    }
  }
  json footer;
  footer["type"] = "summary";
  footer["output_a"] = trace.output_a;
  footer["output_b"] = trace.output_b;
  footer["alice_terminated_round"] = trace.alice_terminated_round;
  footer["bob_terminated_round"] = trace.bob_terminated_round;
  footer["bob_phase_switch_round"] = trace.bob_phase_switch_round;
  footer["semi_terminated"] = trace.semi_terminated;
  footer["aborted"] = trace.aborted;
  if (trace.aborted) footer["abort_reason"] = trace.abort_reason;
  footer["metrics"] = metrics_to_json_obj(trace.metrics);
  out << footer.dump() << "\n";
  return out.str();
}

RunTrace trace_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  RunTrace trace;
  bool saw_header = false;
  bool saw_summary = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(Errc::usage, std::string("trace: bad JSON line: ") + e.what());
    }
    std::string type = j.value("type", "");
    if (type == "header") {
      saw_header = true;
      trace.scheme = parse_scheme(j.at("scheme").get<std::string>());
      trace.n = j.at("n").get<int>();
      trace.x = j.at("x").get<std::string>();
      trace.y = j.at("y").get<std::string>();
      trace.reference = j.at("reference").get<std::string>();
      trace.settle_rounds = j.at("settle_rounds").get<int>();
      trace.noise_spec = j.value("noise", std::string());
      trace.max_rounds = j.value("max_rounds", int64_t{0});
    } else if (type == "step") {
      if (!saw_header) fail(Errc::usage, "trace: step before header");
      trace.steps.push_back(step_from_json(j));
    } else if (type == "event") {
      // informational
    } else if (type == "summary") {
      saw_summary = true;
      trace.output_a = j.at("output_a").get<std::string>();
      trace.output_b = j.at("output_b").get<std::string>();
      trace.alice_terminated_round = j.at("alice_terminated_round").get<int>();
      trace.bob_terminated_round = j.at("bob_terminated_round").get<int>();
      trace.bob_phase_switch_round = j.at("bob_phase_switch_round").get<int>();
      trace.semi_terminated = j.at("semi_terminated").get<bool>();
      trace.aborted = j.value("aborted", false);
      trace.abort_reason = j.value("abort_reason", std::string());
      trace.metrics = metrics_from_json(j.at("metrics"));
    } else {
      fail(Errc::usage, "trace: unknown record type: " + type);
    }
  }
  if (!saw_header) fail(Errc::usage, "trace: missing header record");
  if (!saw_summary) fail(Errc::usage, "trace: missing summary record");
  return trace;
}

void write_trace_file(const RunTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot write trace file: " + path);
  out << trace_to_jsonl(trace);
  if (!out) fail(Errc::io, "short write to trace file: " + path);
}

RunTrace read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return trace_from_jsonl(buf.str());
}

int64_t noise_used(const RunTrace& trace) {
  int64_t total = 0;
  for (const StepRecord& s : trace.steps) total += s.erased_slots;
  return total;
}

}  // namespace erasim
