#include "erasim/channel.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "erasim/error.hpp"
#include "json.hpp"

namespace erasim {

std::string ChannelToken::str() const {
  switch (kind) {
    case TokenKind::silence:
      return "silence";
    case TokenKind::erasure:
      return "erasure";
    case TokenKind::symbol:
      return "sym:" + std::to_string(info) + "," + std::to_string(parity);
  }
  fail(Errc::internal, "bad token kind");
}

ChannelToken ChannelToken::parse(const std::string& s) {
  if (s == "silence") return silence();
  if (s == "erasure") return erasure();
  if (s.size() == 7 && s.rfind("sym:", 0) == 0 && s[5] == ',' &&
      (s[4] == '0' || s[4] == '1') && (s[6] == '0' || s[6] == '1'))
    return symbol(s[4] - '0', s[6] - '0');
  fail(Errc::usage, "bad token encoding: " + s);
}

ChannelToken transmit(const ChannelToken& token, bool erase) {
  if (token.is_erasure())
    fail(Errc::internal, "parties cannot transmit the erasure mark");
  return erase ? ChannelToken::erasure() : token;
}

NoisePattern NoisePattern::from_list(const std::vector<int64_t>& ts) {
  NoisePattern p;
  for (int64_t t : ts) {
    if (t < 1) fail(Errc::usage, "erased timesteps are 1-based");
    p.erased.insert(t);
  }
  return p;
}

NoisePattern NoisePattern::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open noise file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::usage, "noise file " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("erase") || !j["erase"].is_array())
    fail(Errc::usage, "noise file " + path + ": expected {\"erase\": [t, ...]}");
  std::vector<int64_t> ts;
  for (const auto& v : j["erase"]) {
    if (!v.is_number_integer())
      fail(Errc::usage, "noise file " + path + ": non-integer timestep");
    ts.push_back(v.get<int64_t>());
  }
  return from_list(ts);
}

namespace {

class PatternNoise : public NoiseSource {
 public:
  explicit PatternNoise(NoisePattern pattern, std::string spec)
      : pattern_(std::move(pattern)), spec_(std::move(spec)) {}

  bool decide(const NoiseContext& ctx) override {
    return pattern_.contains(ctx.wire_timestep);
  }
  int64_t budget() const override {
    return static_cast<int64_t>(pattern_.erased.size());
  }
  std::string spec() const override { return spec_; }

 private:
  NoisePattern pattern_;
  std::string spec_;
};

// How many leading slots must be erased to make a whole token undecodable.
int kill_slots(int slots_per_token) {
  return slots_per_token == 3 ? 2 : 1;
}

class GreedyAdversary : public NoiseSource {
 public:
  explicit GreedyAdversary(int64_t budget) : budget_(budget), left_(budget) {}

  bool decide(const NoiseContext& ctx) override {
    // Spend only on Alice's own transmissions: erasing the challenge wastes
    // a full round of the simulation per erasure.
    if (ctx.sender != Role::alice || ctx.sender_injected) return false;
    int need = kill_slots(ctx.slots_per_token);
    if (ctx.slot_index == 0) commit_ = left_ >= need;
    if (!commit_ || ctx.slot_index >= need) return false;
    --left_;
    return true;
  }
  int64_t budget() const override { return budget_; }
  std::string spec() const override {
    return "adversary:greedy,budget=" + std::to_string(budget_);
  }
  void reset() override {
    left_ = budget_;
    commit_ = false;
  }

 private:
  int64_t budget_;
  int64_t left_;
  bool commit_ = false;
};

int64_t parse_int_field(const std::string& spec, const std::string& field,
                        const std::string& value) {
  try {
    size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(Errc::usage, "noise spec " + spec + ": bad " + field);
  }
}

double parse_double_field(const std::string& spec, const std::string& field,
                          const std::string& value) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    fail(Errc::usage, "noise spec " + spec + ": bad " + field);
  }
}

// Splits "k1=v1,k2=v2" tails of generator specs.
std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& spec, const std::string& tail) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(tail);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      fail(Errc::usage, "noise spec " + spec + ": expected key=value, got " + item);
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

}  // namespace

std::unique_ptr<NoiseSource> make_pattern_noise(NoisePattern pattern) {
  std::string spec = "list:";
  bool first = true;
  for (int64_t t : pattern.erased) {
    if (!first) spec += ",";
    spec += std::to_string(t);
    first = false;
  }
  return std::make_unique<PatternNoise>(std::move(pattern), std::move(spec));
}

std::unique_ptr<NoiseSource> make_greedy_adversary(int64_t budget) {
  if (budget < 0) fail(Errc::usage, "adversary budget must be non-negative");
  return std::make_unique<GreedyAdversary>(budget);
}

std::unique_ptr<NoiseSource> make_noise(const std::string& spec) {
  if (spec.empty() || spec == "none")
    return std::make_unique<PatternNoise>(NoisePattern{}, "none");
  if (spec.rfind("file:", 0) == 0)
    return std::make_unique<PatternNoise>(NoisePattern::from_file(spec.substr(5)),
                                          spec);
  if (spec.rfind("list:", 0) == 0) {
    std::vector<int64_t> ts;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) ts.push_back(parse_int_field(spec, "timestep", item));
    }
    return std::make_unique<PatternNoise>(NoisePattern::from_list(ts), spec);
  }
  if (spec.rfind("random:", 0) == 0) {
    double p = -1;
    int64_t seed = -1, horizon = -1;
    for (const auto& [k, v] : parse_kv(spec, spec.substr(7))) {
      if (k == "p")
        p = parse_double_field(spec, k, v);
      else if (k == "seed")
        seed = parse_int_field(spec, k, v);
      else if (k == "horizon")
        horizon = parse_int_field(spec, k, v);
      else
        fail(Errc::usage, "noise spec " + spec + ": unknown key " + k);
    }
    if (p < 0.0 || p > 1.0 || seed < 0 || horizon < 1)
      fail(Errc::usage, "noise spec " + spec +
                            ": need p in [0,1], seed >= 0, horizon >= 1");
    // Materialized up front: a random source is just a pattern drawn once,
    // which keeps runs reproducible byte for byte.
    std::mt19937_64 rng(static_cast<uint64_t>(seed));
    std::bernoulli_distribution coin(p);
    NoisePattern pattern;
    for (int64_t t = 1; t <= horizon; ++t) {
      if (coin(rng)) pattern.erased.insert(t);
    }
    return std::make_unique<PatternNoise>(std::move(pattern), spec);
  }
  if (spec.rfind("burst:", 0) == 0) {
    int64_t start = -1, len = -1;
    for (const auto& [k, v] : parse_kv(spec, spec.substr(6))) {
      if (k == "start")
        start = parse_int_field(spec, k, v);
      else if (k == "len")
        len = parse_int_field(spec, k, v);
      else
        fail(Errc::usage, "noise spec " + spec + ": unknown key " + k);
    }
    if (start < 1 || len < 0)
      fail(Errc::usage, "noise spec " + spec + ": need start >= 1, len >= 0");
    NoisePattern pattern;
    for (int64_t t = start; t < start + len; ++t) pattern.erased.insert(t);
    return std::make_unique<PatternNoise>(std::move(pattern), spec);
  }
  if (spec.rfind("adversary:", 0) == 0) {
    std::string tail = spec.substr(10);
    auto comma = tail.find(',');
    std::string kind = tail.substr(0, comma);
    if (kind != "greedy")
      fail(Errc::usage, "noise spec " + spec + ": unknown adversary " + kind);
    int64_t budget = -1;
    if (comma != std::string::npos) {
      for (const auto& [k, v] : parse_kv(spec, tail.substr(comma + 1))) {
        if (k == "budget")
          budget = parse_int_field(spec, k, v);
        else
          fail(Errc::usage, "noise spec " + spec + ": unknown key " + k);
      }
    }
    if (budget < 0)
      fail(Errc::usage, "noise spec " + spec + ": need budget=T");
    return make_greedy_adversary(budget);
  }
  fail(Errc::usage, "unknown noise spec: " + spec);
}

}  // namespace erasim
