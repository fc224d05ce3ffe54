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

// Command-line front end: optimize, baseline, profile and simulate.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrepeater/baseline.hpp"
#include "qrepeater/config.hpp"
#include "qrepeater/errors.hpp"
#include "qrepeater/planner.hpp"
#include "qrepeater/protocol.hpp"
#include "qrepeater/simulate.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qrep;

constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;
constexpr int kExitProtocol = 4;

// Flags shared by every subcommand; unset values leave the config alone.
struct CommonFlags {
  std::string config;
  std::optional<std::string> scheme;
  std::optional<int> window;
  std::optional<int> mmax;
  bool noMultilevel = false;
  bool noNodeskip = false;
  std::optional<std::string> unit;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "INI run configuration");
    app->add_option("--scheme", scheme, "bdcz or ctsl")
        ->check(CLI::IsMember({"bdcz", "ctsl"}));
    app->add_option("--window", window, "connection split half-width in table units");
    app->add_option("--mmax", mmax, "maximum pumping steps per chain");
    app->add_flag("--no-multilevel", noMultilevel, "disable multi-level pumping");
    app->add_flag("--no-nodeskip", noNodeskip, "disable node skipping");
    app->add_option("--unit", unit, "distance unit, e.g. 10km or 1km");
  }

  RunConfig load() const {
    RunConfig cfg = config.empty() ? RunConfig{} : load_config(config);
    if (scheme) cfg.planner.scheme = scheme_from_string(*scheme);
    if (window) cfg.planner.window = *window;
    if (mmax) cfg.planner.mMax = *mmax;
    if (noMultilevel) cfg.planner.allowMultiLevelPumping = false;
    if (noNodeskip) cfg.planner.allowNodeSkipping = false;
    if (unit) {
      std::string u = *unit;
      if (u.size() > 2 && u.substr(u.size() - 2) == "km") u.resize(u.size() - 2);
      try {
        std::size_t used = 0;
        cfg.planner.distanceUnit = std::stod(u, &used);
        if (used != u.size()) throw std::invalid_argument(u);
      } catch (const std::logic_error&) {
        throw ConfigError("--unit: cannot parse '" + *unit + "'");
      }
    }
    cfg.validate();
    return cfg;
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

int cmd_optimize(const CommonFlags& flags, double km, double fidelity, const std::string& out) {
  const RunConfig cfg = flags.load();
  const HardwareParams hp = cfg.resolved_hardware();
  Planner planner(hp, cfg.grid.make(), cfg.planner);
  const int n = planner.units_for(km);
  const int extra = cfg.planner.extraDistance >= 0
                        ? cfg.planner.extraDistance
                        : (cfg.planner.scheme == Scheme::CTSL ? planner.bridge_units() : 0);
  planner.fill(n + extra);
  const auto plan = planner.query(km, fidelity);

  ordered_json summary;
  summary["scheme"] = to_string(cfg.planner.scheme);
  summary["L_km"] = km;
  summary["F_target"] = fidelity;
  summary["feasible"] = plan.has_value();
  summary["max_fidelity"] = planner.max_fidelity(km);
  summary["fill_seconds"] = planner.stats().seconds;
  summary["connect_evaluations"] = planner.stats().connectEvaluations;
  summary["pump_evaluations"] = planner.stats().pumpEvaluations;
  if (plan) {
    summary["avg_time_s"] = plan->avgTime;
    summary["fidelity"] = plan->state.fidelity();
    summary["distance_km"] = plan->protocol.layout.km(plan->protocol.root->span);
    summary["distinct_nodes"] = count_distinct_nodes(plan->protocol);
    summary["storage_peak"] = occupancy_of(plan->protocol).peak();
    write_text(out.empty() ? cfg.output.protocol : out, to_json(plan->protocol).dump(2) + "\n");
  }
  const std::string text = summary.dump(2) + "\n";
  if (!cfg.output.summary.empty()) write_text(cfg.output.summary, text);
  std::cerr << text;
  if (!plan) {
    std::cerr << "infeasible: no stored protocol reaches F = " << fidelity << " over " << km
              << " km\n";
    return kExitInfeasible;
  }
  return 0;
}

int cmd_baseline(const CommonFlags& flags, double km, double fidelity, std::optional<int> m,
                 const std::string& out) {
  RunConfig cfg = flags.load();
  if (m) cfg.baseline.pumpSteps = *m;
  const HardwareParams hp = cfg.resolved_hardware();
  const auto plan = unoptimized(cfg.planner.scheme, km, fidelity, hp, cfg.baseline);
  ordered_json summary;
  summary["scheme"] = to_string(cfg.planner.scheme);
  summary["L_km"] = km;
  summary["F_target"] = fidelity;
  summary["feasible"] = plan.has_value();
  if (plan) {
    summary["pump_steps"] = plan->pumpSteps;
    summary["avg_time_s"] = plan->avgTime;
    summary["fidelity"] = plan->state.fidelity();
    summary["distance_km"] = plan->protocol.layout.km(plan->protocol.root->span);
    write_text(out.empty() ? cfg.output.protocol : out, to_json(plan->protocol).dump(2) + "\n");
  }
  const std::string text = summary.dump(2) + "\n";
  if (!cfg.output.summary.empty()) write_text(cfg.output.summary, text);
  std::cerr << text;
  if (!plan) {
    std::cerr << "infeasible: no constant pumping count reaches F = " << fidelity << "\n";
    return kExitInfeasible;
  }
  return 0;
}

int cmd_profile(const CommonFlags& flags, std::optional<double> lmin, std::optional<double> lmax,
                std::optional<double> lstep, const std::vector<double>& fvals,
                const std::string& out) {
  RunConfig cfg = flags.load();
  if (lmin) cfg.profile.lMinKm = *lmin;
  if (lmax) cfg.profile.lMaxKm = *lmax;
  if (lstep) cfg.profile.lStepKm = *lstep;
  if (!fvals.empty()) cfg.profile.fidelities = fvals;
  cfg.validate();
  const HardwareParams hp = cfg.resolved_hardware();
  Planner planner(hp, cfg.grid.make(), cfg.planner);
  const int extra = cfg.planner.extraDistance >= 0
                        ? cfg.planner.extraDistance
                        : (cfg.planner.scheme == Scheme::CTSL ? planner.bridge_units() : 0);
  planner.fill(planner.units_for(cfg.profile.lMaxKm) + extra);

  std::ostringstream csv;
  csv << "scheme,L_km,F_target,t_opt_s,t_base_s,ratio\n";
  const std::string scheme = to_string(cfg.planner.scheme);
  const auto steps = static_cast<int>(
      std::floor((cfg.profile.lMaxKm - cfg.profile.lMinKm) / cfg.profile.lStepKm + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double km = cfg.profile.lMinKm + i * cfg.profile.lStepKm;
    const auto candidates = baseline_candidates(cfg.planner.scheme, km, hp, cfg.baseline);
    for (double f : cfg.profile.fidelities) {
      const auto opt = planner.query(km, f);
      const auto base = pick_baseline(candidates, f);
      const double tOpt = opt ? opt->avgTime : std::numeric_limits<double>::infinity();
      const double tBase = base ? base->avgTime : std::numeric_limits<double>::infinity();
      const double ratio = !opt ? std::numeric_limits<double>::quiet_NaN() : tBase / tOpt;
      csv << scheme << ',' << fmt(km) << ',' << fmt(f) << ',' << fmt(tOpt) << ','
          << fmt(tBase) << ',' << fmt(ratio) << '\n';
    }
  }
  write_text(out.empty() ? cfg.output.csv : out, csv.str());
  return 0;
}

int cmd_simulate(const CommonFlags& flags, const std::string& protocolPath,
                 std::optional<std::uint64_t> trials, std::optional<std::uint64_t> seed,
                 const std::string& out, const std::string& samples) {
  RunConfig cfg = flags.load();
  if (trials) cfg.trials = *trials;
  if (seed) cfg.seed = *seed;
  std::ifstream in(protocolPath);
  if (!in) throw ConfigError("cannot open protocol file " + protocolPath);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("protocol file is not valid JSON: ") + e.what());
  }
  // The protocol records its scheme; resolve the error shape against it.
  if (j.contains("scheme") && j["scheme"].is_string()) {
    cfg.planner.scheme = scheme_from_string(j["scheme"].get<std::string>());
  }
  const HardwareParams hp = cfg.resolved_hardware();
  const Protocol p = protocol_from_json(j, hp);
  const TimeDistribution d = run(p, hp, cfg.trials, cfg.seed);
  write_text(out.empty() ? cfg.output.summary : out, to_json(d, p).dump(2) + "\n");
  const std::string samplePath = samples.empty() ? cfg.output.samples : samples;
  if (!samplePath.empty()) {
    std::ostringstream os;
    write_samples_csv(os, d);
    write_text(samplePath, os.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum repeater protocol optimizer"};
  app.require_subcommand(1);

  CommonFlags common;
  double km = 0.0;
  double fidelity = 0.0;
  std::string out;

  auto* opt = app.add_subcommand("optimize", "search the fastest protocol for (L, F)");
  common.attach(opt);
  opt->add_option("--L", km, "final distance in km")->required()->check(CLI::PositiveNumber);
  opt->add_option("--F", fidelity, "target fidelity")->required()->check(CLI::Range(0.5, 1.0));
  opt->add_option("--out", out, "protocol JSON path (default: stdout)");

  auto* base = app.add_subcommand("baseline", "build the unoptimized reference protocol");
  common.attach(base);
  std::optional<int> m;
  base->add_option("--L", km, "final distance in km")->required()->check(CLI::PositiveNumber);
  base->add_option("--F", fidelity, "target fidelity")->required()->check(CLI::Range(0.5, 1.0));
  base->add_option("--m", m, "fixed pumping steps per level")->check(CLI::NonNegativeNumber);
  base->add_option("--out", out, "protocol JSON path (default: stdout)");

  auto* prof = app.add_subcommand("profile", "sweep t(L, F) for optimized and baseline");
  common.attach(prof);
  std::optional<double> lmin, lmax, lstep;
  std::vector<double> fvals;
  prof->add_option("--lmin", lmin, "smallest distance in km");
  prof->add_option("--lmax", lmax, "largest distance in km");
  prof->add_option("--lstep", lstep, "distance step in km");
  prof->add_option("--F", fvals, "target fidelities")->delimiter(',');
  prof->add_option("--out", out, "CSV path (default: stdout)");

  auto* sim = app.add_subcommand("simulate", "Monte Carlo completion times of a protocol");
  common.attach(sim);
  std::string protocolPath;
  std::optional<std::uint64_t> trials, seed;
  std::string samples;
  sim->add_option("protocol", protocolPath, "protocol JSON file")->required();
  sim->add_option("--trials", trials, "number of trials")->check(CLI::PositiveNumber);
  sim->add_option("--seed", seed, "64-bit seed");
  sim->add_option("--out", out, "summary JSON path (default: stdout)");
  sim->add_option("--samples", samples, "optional CSV of raw samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (opt->parsed()) return cmd_optimize(common, km, fidelity, out);
    if (base->parsed()) return cmd_baseline(common, km, fidelity, m, out);
    if (prof->parsed()) return cmd_profile(common, lmin, lmax, lstep, fvals, out);
    if (sim->parsed()) return cmd_simulate(common, protocolPath, trials, seed, out, samples);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ProtocolError& e) {
    std::cerr << "invalid protocol: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const qrep::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
