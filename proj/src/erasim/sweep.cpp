#include "erasim/sweep.hpp"

#include <cmath>
#include <sstream>

#include "erasim/channel.hpp"
#include "erasim/error.hpp"
#include "erasim/sim.hpp"

namespace erasim {

namespace {

SweepRow run_with_budget(SchemeId scheme, const Protocol& pi, const Bits& x,
                         const Bits& y, int64_t budget, int64_t baseline_bits) {
  auto noise = make_greedy_adversary(budget);
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.protocol = &pi;
  cfg.x = x;
  cfg.y = y;
  cfg.noise = noise.get();
  cfg.collect_trace = false;
  RunResult r = run(cfg);
  if (r.aborted) fail(Errc::internal, "sweep run hit the safety cap");

  SweepRow row;
  row.budget = budget;
  row.erasures_used = r.metrics.erasures_counted;
  row.transmissions = r.metrics.transmissions;
  row.cc_bits = r.metrics.cc_bits;
  row.rc_timesteps = r.metrics.rc_timesteps;
  row.rate = r.metrics.cc_bits > 0
                 ? static_cast<double>(pi.length()) /
                       static_cast<double>(r.metrics.cc_bits)
                 : 0.0;
  if (row.erasures_used > 0)
    row.waste_bits_per_erasure =
        static_cast<double>(r.metrics.cc_bits - baseline_bits) /
        static_cast<double>(row.erasures_used);
  return row;
}

int64_t baseline_bits(SchemeId scheme, const Protocol& pi, const Bits& x,
                      const Bits& y) {
  RunConfig cfg;
  cfg.scheme = scheme;
  cfg.protocol = &pi;
  cfg.x = x;
  cfg.y = y;
  cfg.collect_trace = false;
  return run(cfg).metrics.cc_bits;
}

}  // namespace

std::vector<SweepRow> sweep_budget(SchemeId scheme, const Protocol& pi,
                                   const Bits& x, const Bits& y,
                                   int64_t t_max) {
  if (t_max < 0) fail(Errc::usage, "sweep: t_max must be >= 0");
  int64_t base = baseline_bits(scheme, pi, x, y);
  std::vector<SweepRow> rows;
  for (int64_t t = 0; t <= t_max; ++t)
    rows.push_back(run_with_budget(scheme, pi, x, y, t, base));
  return rows;
}

std::vector<SweepRow> sweep_delta(SchemeId scheme, const Protocol& pi,
                                  const Bits& x, const Bits& y,
                                  const std::vector<double>& deltas) {
  int64_t base = baseline_bits(scheme, pi, x, y);
  std::vector<SweepRow> rows;
  for (double d : deltas) {
    if (!(d >= 0.0) || d >= 0.5)
      fail(Errc::usage, "sweep: delta must lie in [0, 0.5)");
    // Largest T with T <= d * (N + 2T).
    int64_t budget = static_cast<int64_t>(
        std::floor(d * pi.length() / (1.0 - 2.0 * d) + 1e-9));
    SweepRow row = run_with_budget(scheme, pi, x, y, budget, base);
    row.delta = d;
    row.rate_analytic = 0.5 - d;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool delta_mode) {
  std::ostringstream out;
  if (delta_mode)
    out << "delta,T,erasures,transmissions,cc_bits,rc_timesteps,rate,"
           "rate_analytic,waste_bits_per_erasure,waste_analytic\n";
  else
    out << "T,erasures,transmissions,cc_bits,rc_timesteps,rate,"
           "waste_bits_per_erasure,waste_analytic\n";
  for (const SweepRow& r : rows) {
    if (delta_mode) out << r.delta << "," << r.budget << ",";
    else out << r.budget << ",";
    out << r.erasures_used << "," << r.transmissions << "," << r.cc_bits << ","
        << r.rc_timesteps << "," << r.rate << ",";
    if (delta_mode) out << r.rate_analytic << ",";
    out << r.waste_bits_per_erasure << "," << r.waste_analytic << "\n";
  }
  return out.str();
}

}  // namespace erasim
