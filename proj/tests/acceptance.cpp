// Copyright 2026 The qrepeater Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one PASS/FAIL line per criterion.
//
//   qrepeater_acceptance            run every criterion
//   qrepeater_acceptance 4 9        run the listed criteria
//
// Exit status is 0 only when every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qrepeater/baseline.hpp"
#include "qrepeater/kernels.hpp"
#include "qrepeater/oracle.hpp"
#include "qrepeater/planner.hpp"
#include "qrepeater/simulate.hpp"
#include "support/exhaustive.hpp"
#include "support/generators.hpp"

using namespace qrep;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

HardwareParams hardware(Scheme s, double p = 0.995, double eta = 0.995) {
  HardwareParams hp;
  hp.gateReliability = p;
  hp.measurementReliability = eta;
  hp.errorShape = s == Scheme::CTSL ? ErrorShape::Dephased : ErrorShape::Werner;
  return hp;
}

PlannerOptions planner_options(Scheme s) {
  PlannerOptions o;
  o.scheme = s;
  return o;
}

// Table covering `km` plus the per-scheme query slack.
Planner filled(Scheme s, double km, const HardwareParams& hp, PlannerOptions o,
               std::size_t bins = 100) {
  Planner pl(hp, ClassGrid::uniform(bins, 8), o);
  const int extra = s == Scheme::CTSL ? pl.bridge_units() : 0;
  pl.fill(pl.units_for(km) + extra);
  return pl;
}

double max_abs(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  double d = 0.0;
  for (int k = 0; k < 4; ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

const std::vector<double> kFidelities{0.90, 0.91, 0.92, 0.93, 0.94, 0.95, 0.96, 0.97};

// 1. Closed-form kernels against the density-matrix circuits.
Outcome kernel_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  testing::Gen gen(20240601);
  double worst = 0.0;
  int cases = 0;
  for (double p : {1.0, 0.995, 0.990}) {
    for (double eta : {1.0, 0.995, 0.990}) {
      HardwareParams hp;
      hp.gateReliability = p;
      hp.measurementReliability = eta;
      const auto localConnect = make_connect_map(hp);
      const auto localPump = make_pump_map(hp);
      for (int i = 0; i < 200; ++i) {
        const auto a = gen.any_state();
        const auto b = gen.any_state();
        const auto g = gen.any_state();
        worst = std::max(worst, max_abs(localConnect(a, b).f,
                                        oracle::simulate_connect(a, b, hp, std::nullopt).f));
        worst = std::max(worst, max_abs(connect(a, b, hp, g).f,
                                        oracle::simulate_connect(a, b, hp, g).f));
        const auto kp = localPump(a, b);
        const auto op = oracle::simulate_pump(a, b, hp, std::nullopt);
        worst = std::max({worst, max_abs(kp.state.f, op.state.f),
                          std::abs(kp.successProb - op.successProb)});
        const auto kg = pump(a, b, hp, g);
        const auto og = oracle::simulate_pump(a, b, hp, g);
        worst = std::max({worst, max_abs(kg.state.f, og.state.f),
                          std::abs(kg.successProb - og.successProb)});
        const auto ch = teleported_gate_channel(g, hp);
        const auto w = oracle::teleported_cnot_weights(g, hp);
        for (int k = 0; k < 16; ++k) worst = std::max(worst, std::abs(ch.pauliWeights[k] - w[k]));
        ++cases;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 120.0,
          std::to_string(cases) + " inputs, max deviation " + num(worst, 3) + ", " +
              num(secs, 3) + " s"};
}

// 2. Elementary generation model.
Outcome generation_model() {
  const HardwareParams hp;
  const double tmin = min_generation_time(10.0, hp);
  const double atMin = generation_fidelity(tmin, 10.0, hp);
  const double spot = generation_fidelity(2.0 * tmin, 10.0, hp);
  bool monotone = true;
  double prev = 0.5;
  for (double r = 1.0; r < 1e8; r *= 1.05) {
    const double f = generation_fidelity(r * tmin, 10.0, hp);
    monotone = monotone && f >= prev;
    prev = f;
  }
  const bool limit = generation_fidelity(1e12 * tmin, 10.0, hp) > 1.0 - 1e-9;
  const bool ok = atMin == 0.5 && std::abs(spot - 0.501953125) <= 1e-12 && monotone && limit;
  return {ok, "F0(tmin) = " + num(atMin, 17) + ", F0(2 tmin) = " + num(spot, 17) +
                  ", monotone " + (monotone ? "yes" : "no") + ", limit " +
                  (limit ? "1" : "not reached")};
}

// 3. Table search against enumeration of every tree in the same grammar.
Outcome small_scale_exactness() {
  const HardwareParams hp;
  int compared = 0, equal = 0, skipped = 0;
  double worstGap = 0.0;
  std::string firstDiff;
  for (int n : {1, 2}) {
    for (std::size_t q : {4u, 6u, 10u}) {
      for (int mMax : {0, 1, 2}) {
        for (double f : {0.80, 0.85, 0.90, 0.95}) {
          const auto grid = ClassGrid::uniform(q, 1);
          auto o = planner_options(Scheme::BDCZ);
          o.mMax = mMax;
          o.window = n;
          Planner pl(hp, grid, o);
          pl.fill(n);
          const auto plan = pl.query(n * 10.0, f);
          const double dp = plan ? plan->avgTime : kInf;
          // Trees slower than the table's answer cannot beat it; when the
          // table has none, search up to 50 ms, far beyond any 20 km pair.
          const auto ex = testing::exhaustive_bdcz(n, f, hp, grid, mMax, o.skipCap, 10.0,
                                                   plan ? dp : 0.05);
          if (!ex.complete) {
            ++skipped;
            continue;
          }
          ++compared;
          if (dp == ex.bestTime) {
            ++equal;
          } else {
            const double gap = std::isinf(dp) ? kInf : dp / ex.bestTime - 1.0;
            worstGap = std::max(worstGap, gap);
            if (firstDiff.empty()) {
              firstDiff = "n=" + std::to_string(n) + " q=" + std::to_string(q) +
                          " mMax=" + std::to_string(mMax) + " F=" + num(f, 3) + ": table " +
                          num(dp) + " s vs enumeration " + num(ex.bestTime) + " s";
            }
          }
        }
      }
    }
  }
  std::string detail = std::to_string(equal) + "/" + std::to_string(compared) +
                       " instances equal, " + std::to_string(skipped) +
                       " over the enumeration budget";
  if (!firstDiff.empty()) {
    detail += "; worst excess " + (std::isinf(worstGap) ? std::string("infeasible") :
                                   num(100 * worstGap, 3) + "%") + "; e.g. " + firstDiff;
  }
  return {compared > 0 && equal == compared, detail};
}

// 4. Optimized never slower than the baseline on the profile grid.
Outcome dominance() {
  std::string detail;
  bool ok = true;
  for (Scheme s : {Scheme::BDCZ, Scheme::CTSL}) {
    const auto hp = hardware(s);
    const auto t0 = std::chrono::steady_clock::now();
    const Planner pl = filled(s, 1280.0, hp, planner_options(s));
    int checked = 0, violations = 0, optOnly = 0;
    double worst = 0.0;
    std::string where;
    for (int km = 20; km <= 1280; km += 10) {
      const auto cands = baseline_candidates(s, km, hp);
      for (double f : kFidelities) {
        const auto base = pick_baseline(cands, f);
        const auto opt = pl.query(km, f);
        if (!base) {
          if (opt) ++optOnly;
          continue;
        }
        ++checked;
        const double tOpt = opt ? opt->avgTime : kInf;
        if (tOpt > base->avgTime) {
          ++violations;
          if (tOpt / base->avgTime > worst) {
            worst = tOpt / base->avgTime;
            where = std::to_string(km) + " km F=" + num(f, 3);
          }
        }
      }
    }
    ok = ok && violations == 0;
    detail += to_string(s) + ": " + std::to_string(checked) + " points, " +
              std::to_string(violations) + " violations" +
              (violations ? " (worst " + num(worst) + "x at " + where + ")" : "") + ", " +
              std::to_string(optOnly) + " optimized-only, fill " +
              num(seconds_since(t0), 3) + " s; ";
  }
  return {ok, detail};
}

// 5. Baseline jumps at 2^p + 1 segments; optimized curve free of jumps.
Outcome jump_structure() {
  const double f = 0.90;
  const double jump = 1.5;
  const auto hp = hardware(Scheme::BDCZ);
  const Planner pl = filled(Scheme::BDCZ, 1280.0, hp, planner_options(Scheme::BDCZ));
  std::vector<int> jumps;
  double prevBase = 0.0, prevOpt = 0.0, worstOpt = 0.0;
  int worstAt = 0;
  std::vector<int> optOver;
  for (int n = 2; n <= 128; ++n) {
    const auto base = unoptimized_bdcz(n * 10.0, f, hp);
    const auto opt = pl.query(n * 10.0, f);
    const double tb = base ? base->avgTime : kInf;
    const double to = opt ? opt->avgTime : kInf;
    if (prevBase > 0 && tb / prevBase > jump) jumps.push_back(n);
    if (prevOpt > 0) {
      const double r = to / prevOpt;
      if (r >= jump) optOver.push_back(n);
      if (r > worstOpt) {
        worstOpt = r;
        worstAt = n;
      }
    }
    prevBase = tb;
    prevOpt = to;
  }
  const std::vector<int> expected{3, 5, 9, 17, 33, 65};
  auto list = [](const std::vector<int>& v) {
    std::string s;
    for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
    return s.empty() ? std::string("none") : s;
  };
  const bool ok = jumps == expected && optOver.empty();
  return {ok, "F=0.90, L/L0 2..128: baseline jumps at " + list(jumps) + " (expected " +
                  list(expected) + "); optimized max adjacent ratio " + num(worstOpt) +
                  " at L/L0=" + std::to_string(worstAt) + ", ratio >= 1.5 at L/L0 " +
                  list(optOver)};
}

// 6. Threshold effect of multi-level pumping at p = eta = 0.99.
Outcome multilevel_threshold() {
  const auto hp = hardware(Scheme::CTSL, 0.99, 0.99);
  auto with = planner_options(Scheme::CTSL);
  auto without = with;
  without.allowMultiLevelPumping = false;
  const Planner a = filled(Scheme::CTSL, 500.0, hp, with);
  const Planner b = filled(Scheme::CTSL, 500.0, hp, without);
  bool ok = true;
  std::string detail;
  for (double km : {300.0, 400.0, 500.0}) {
    const bool base = unoptimized_ctsl(km, 0.95, hp).has_value();
    const bool noMl = b.query(km, 0.95).has_value();
    const auto ml = a.query(km, 0.95);
    ok = ok && !base && !noMl && ml.has_value();
    detail += num(km) + " km: baseline " + (base ? "feasible" : "infeasible") +
              ", no multilevel " + (noMl ? "feasible" : "infeasible") + " (max F " +
              num(b.max_fidelity(km)) + "), multilevel " +
              (ml ? "t=" + num(ml->avgTime) + " s" : std::string("infeasible")) + " (max F " +
              num(a.max_fidelity(km)) + "); ";
  }
  return {ok, detail};
}

// 7. Multi-level pumping raises the fidelity ceiling.
Outcome ceiling_extension() {
  const auto hp = hardware(Scheme::CTSL);
  auto with = planner_options(Scheme::CTSL);
  auto without = with;
  without.allowMultiLevelPumping = false;
  const double fw = filled(Scheme::CTSL, 500.0, hp, with).max_fidelity(500.0);
  const double fo = filled(Scheme::CTSL, 500.0, hp, without).max_fidelity(500.0);
  return {fo < fw, "500 km max F: without multilevel " + num(fo, 6) + ", with " + num(fw, 6)};
}

// 8. Eleven-segment CTSL example.
Outcome eleven_segment_example() {
  const auto hp = hardware(Scheme::CTSL);
  const double km = 110.0;
  const auto cands = baseline_candidates(Scheme::CTSL, km, hp);
  // Evaluate at 0.976 when the baseline reaches it; otherwise at the
  // highest fidelity this baseline reaches, which is how 0.976 was chosen.
  const BaselinePlan* best = &cands.front();
  for (const auto& c : cands) {
    if (c.state.fidelity() > best->state.fidelity()) best = &c;
  }
  const double f = best->state.fidelity() >= 0.976 ? 0.976 : best->state.fidelity();
  const auto base = pick_baseline(cands, f);
  const Planner pl = filled(Scheme::CTSL, km, hp, planner_options(Scheme::CTSL));
  const auto opt = pl.query(km, f);
  if (!base || !opt) {
    return {false, "F=" + num(f, 6) + ": baseline " + (base ? "ok" : "infeasible") +
                       ", optimized " + (opt ? "ok" : "infeasible")};
  }
  const double ratio = base->avgTime / opt->avgTime;
  return {ratio >= 4.0, "F=" + num(f, 6) + " (baseline ceiling " +
                            num(best->state.fidelity(), 6) + "): baseline m=" +
                            std::to_string(base->pumpSteps) + " t=" + num(base->avgTime) +
                            " s, optimized t=" + num(opt->avgTime) + " s, ratio " + num(ratio)};
}

// 9. Monte Carlo against the average-time estimate.
Outcome monte_carlo() {
  bool ok = true;
  std::string detail;
  for (Scheme s : {Scheme::BDCZ, Scheme::CTSL}) {
    const auto hp = hardware(s);
    const Planner pl = filled(s, 1280.0, hp, planner_options(s));
    const auto plan = pl.query(1280.0, 0.97);
    if (!plan) {
      ok = false;
      detail += to_string(s) + ": no protocol; ";
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto d = run(plan->protocol, hp, 10000, 1);
    const double secs = seconds_since(t0);
    const auto again = run(plan->protocol, hp, 200, 1);
    bool same = true;
    for (std::size_t i = 0; i < again.samples.size(); ++i) {
      same = same && again.samples[i] == d.samples[i];
    }
    const double ratio = d.mean / plan->avgTime;
    const double se = d.stddev / std::sqrt(static_cast<double>(d.trials)) / plan->avgTime;
    ok = ok && same && ratio >= 1.0 && ratio <= 4.0;
    detail += to_string(s) + ": analytic " + num(plan->avgTime) + " s, MC mean " + num(d.mean) +
              " s, ratio " + num(ratio) + " +- " + num(se, 2) + ", reproducible " +
              (same ? "yes" : "no") + ", " + num(secs, 3) + " s; ";
  }
  return {ok, detail};
}

// 10. Full-size fill time and evaluation scaling.
Outcome scale() {
  const auto hp = hardware(Scheme::BDCZ);
  std::vector<double> xs, ys;
  std::string detail;
  double lastSecs = 0.0;
  for (int n : {16, 32, 64, 128}) {
    Planner pl(hp, ClassGrid::uniform(100, 8), planner_options(Scheme::BDCZ));
    pl.fill(n);
    const auto& st = pl.stats();
    const double evals = static_cast<double>(st.connectEvaluations + st.pumpEvaluations);
    xs.push_back(std::log(n));
    ys.push_back(std::log(evals));
    lastSecs = st.seconds;
    detail += "n=" + std::to_string(n) + ": " + num(evals, 4) + " evals " + num(st.seconds, 3) +
              " s; ";
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {lastSecs < 300.0 && slope >= 1.0 && slope <= 1.5,
          detail + "fitted exponent " + num(slope, 3)};
}

// 11. Finer node placement gains little.
Outcome node_placement() {
  const auto hp = hardware(Scheme::BDCZ);
  const double f = 0.95;
  auto fine = planner_options(Scheme::BDCZ);
  fine.distanceUnit = 1.0;
  const auto t0 = std::chrono::steady_clock::now();
  const Planner coarse = filled(Scheme::BDCZ, 400.0, hp, planner_options(Scheme::BDCZ));
  const Planner detailed = filled(Scheme::BDCZ, 400.0, hp, fine);
  bool ok = true;
  std::string detail;
  for (double km : {210.0, 300.0, 400.0}) {
    const auto a = coarse.query(km, f);
    const auto b = detailed.query(km, f);
    if (!a || !b) {
      ok = false;
      detail += num(km) + " km: infeasible; ";
      continue;
    }
    const double gain = 1.0 - b->avgTime / a->avgTime;
    ok = ok && gain >= 0.0 && gain <= 0.15;
    detail += num(km) + " km: 10 km grid " + num(a->avgTime) + " s, 1 km grid " +
              num(b->avgTime) + " s, gain " + num(100 * gain, 3) + "%; ";
  }
  return {ok, "F=0.95; " + detail + "fills " + num(seconds_since(t0), 3) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<const char*, std::function<Outcome()>>> criteria = {
      {1, {"kernel/oracle equivalence", kernel_oracle}},
      {2, {"generation model", generation_model}},
      {3, {"small-scale exactness", small_scale_exactness}},
      {4, {"dominance over baseline", dominance}},
      {5, {"jump structure", jump_structure}},
      {6, {"multi-level threshold", multilevel_threshold}},
      {7, {"fidelity ceiling extension", ceiling_extension}},
      {8, {"eleven-segment example", eleven_segment_example}},
      {9, {"Monte Carlo consistency", monte_carlo}},
      {10, {"scale", scale}},
      {11, {"node placement", node_placement}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (!criteria.count(c)) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(c);
  }
  if (selected.empty()) {
    for (const auto& [c, _] : criteria) selected.push_back(c);
  }
  int failed = 0;
  for (int c : selected) {
    const auto& [name, fn] = criteria.at(c);
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2d %s  %s: %s\n", c, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
