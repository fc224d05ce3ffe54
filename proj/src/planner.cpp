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

#include "qrepeater/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <tuple>

#include "qrepeater/errors.hpp"
#include "qrepeater/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qrep {

void PlannerOptions::validate(const HardwareParams& hp) const {
  if (mMax < 0) throw ConfigError("planner: mmax must be >= 0");
  if (window < 0) throw ConfigError("planner: window must be >= 1 (or 0 for automatic)");
  if (skipCap < 1) throw ConfigError("planner: skip_cap must be >= 1");
  if (gatePairGridSize < 1) throw ConfigError("planner: gate_pair_options must be >= 1");
  if (!(distanceUnit > 0)) throw ConfigError("planner: distance unit must be positive");
  if (!(maxGenerationTime > 0)) throw ConfigError("planner: max_generation_time must be positive");
  const double ratio = hp.baseSpacing / distanceUnit;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::round(ratio) < 1) {
    throw ConfigError("planner: distance unit must divide the base spacing");
  }
}

namespace {

auto key(const TableEntry& e) {
  const Origin& o = e.origin;
  return std::make_tuple(e.time, -e.state.f[0], e.nodes, o.kind, o.a, o.b, o.c, o.d, o.e, o.m);
}

}  // namespace

bool better(const TableEntry& x, const TableEntry& y) { return key(x) < key(y); }

Planner::Planner(const HardwareParams& hp, ClassGrid grid, PlannerOptions opts)
    : hp_(hp), grid_(std::move(grid)), opts_(opts) {
  hp_.validate();
  opts_.validate(hp_);
  layout_.scheme = opts_.scheme;
  layout_.unitKm = opts_.distanceUnit;
  bridge_ = static_cast<int>(std::lround(hp_.baseSpacing / opts_.distanceUnit));
  layout_.bridgeUnits = bridge_;
  extra_ = opts_.extraDistance >= 0 ? opts_.extraDistance
                                    : (opts_.scheme == Scheme::CTSL ? bridge_ : 0);
}

int Planner::units_for(double km) const {
  const double r = km / opts_.distanceUnit;
  const double n = std::round(r);
  if (!(km > 0) || std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw ConfigError("distance " + std::to_string(km) + " km is not a positive multiple of " +
                      std::to_string(opts_.distanceUnit) + " km");
  }
  return static_cast<int>(n);
}

int Planner::window_for(int n) const {
  if (opts_.window > 0) return opts_.window;
  // Counted in base segments so a finer unit searches the same region.
  const int perSegment = static_cast<int>(std::lround(hp_.baseSpacing / opts_.distanceUnit));
  const int segments = std::max(1, n / perSegment);
  return (static_cast<int>(std::ceil(std::log2(segments))) + 1) * perSegment;
}

std::vector<TableEntry>& Planner::table(int n, bool purified) {
  return purified ? levels_[n].purified : levels_[n].unpurified;
}

const std::vector<TableEntry>& Planner::table(int n, bool purified) const {
  if (n < 1 || n > nMax_) throw ConfigError("planner: distance outside the filled table");
  return purified ? levels_[n].purified : levels_[n].unpurified;
}

const TableEntry& Planner::entry(int n, bool purified, std::size_t cls) const {
  return table(n, purified).at(cls);
}

std::vector<std::size_t> Planner::classes(int n, bool purified) const {
  std::vector<std::size_t> out;
  const auto& t = table(n, purified);
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (t[c].valid) out.push_back(c);
  }
  return out;
}

inline bool Planner::classify_into(const BellDiagonalState& s, std::size_t& cls) const {
  if (!(s.f[0] >= 0.5)) return false;
  cls = grid_.flat_class_unchecked(s);
  return true;
}

void Planner::offer(std::vector<TableEntry>& dst, const TableEntry& cand) const {
  std::size_t cls = 0;
  if (!classify_into(cand.state, cls)) return;
  TableEntry& cur = dst[cls];
  if (!cur.valid || better(cand, cur)) cur = cand;
}

void Planner::fill(int nMax) {
  if (nMax < 1) throw ConfigError("planner: table size must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  nMax_ = nMax;
  budget_ = storage_budget(opts_.scheme, nMax * opts_.distanceUnit, hp_);
  levels_.assign(static_cast<std::size_t>(nMax + 1), {});
  for (auto& lv : levels_) {
    lv.unpurified.assign(grid_.size(), {});
    lv.purified.assign(grid_.size(), {});
  }
  gateOptions_.clear();
  memo_.clear();
  stats_ = {};
  seed_leaves();
  for (int n = 1; n <= nMax; ++n) {
    sweep_connect(n);
    sweep_pump(n);
    if (opts_.scheme == Scheme::CTSL && n == bridge_) choose_gate_options();
  }
  stats_.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void Planner::seed_leaves() {
  const int lo = bridge_;
  const int hi = opts_.allowNodeSkipping ? opts_.skipCap * bridge_ : bridge_;
  const auto& edges = grid_.fidelity_edges();
  for (int span = lo; span <= std::min(hi, nMax_); ++span) {
    const double km = span * opts_.distanceUnit;
    auto& dst = table(span, false);
    for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
      if (edges[b] >= 1.0) continue;
      const double tau = generation_time_for_fidelity(edges[b], km, hp_);
      if (!(tau <= opts_.maxGenerationTime)) continue;
      TableEntry e;
      e.valid = true;
      e.state = generation_state(tau, km, hp_);
      e.time = tau;
      e.tau = tau;
      e.occupancy = occupancy_leaf();
      e.nodes = 1.0;
      e.origin = {Origin::Leaf, span};
      offer(dst, e);
    }
  }
}

void Planner::choose_gate_options() {
  std::vector<std::size_t> cand;
  const auto& t = table(bridge_, true);
  for (std::size_t c = 0; c < t.size(); ++c) {
    if (t[c].valid) cand.push_back(c);
  }
  std::stable_sort(cand.begin(), cand.end(), [&](std::size_t x, std::size_t y) {
    return t[x].state.f[0] > t[y].state.f[0];
  });
  if (cand.size() > static_cast<std::size_t>(opts_.gatePairGridSize)) {
    cand.resize(static_cast<std::size_t>(opts_.gatePairGridSize));
  }
  gateOptions_ = cand;
}

namespace {

struct Work {
  int k;
  int gate;
  std::size_t j;
};

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

}  // namespace

void Planner::sweep_connect(int n) {
  const bool ctsl = opts_.scheme == Scheme::CTSL;
  const int gap = ctsl ? bridge_ : 0;
  const int avail = n - gap;
  if (avail < 2) return;
  if (ctsl && gateOptions_.empty()) return;
  const int w = window_for(n);
  const int kLo = std::max(1, avail / 2 - w);
  const int kHi = std::min(avail - 1, (avail + 1) / 2 + w);
  const double km = n * opts_.distanceUnit;

  const int nGates = ctsl ? static_cast<int>(gateOptions_.size()) : 1;
  std::vector<ConnectMap> maps;
  std::vector<double> gateTime;
  for (int g = 0; g < nGates; ++g) {
    if (ctsl) {
      const TableEntry& ge = table(bridge_, true)[gateOptions_[g]];
      maps.push_back(make_connect_map(hp_, ge.state));
      gateTime.push_back(ge.time);
    } else {
      maps.push_back(make_connect_map(hp_));
      gateTime.push_back(0.0);
    }
  }

  std::vector<std::vector<std::size_t>> present(static_cast<std::size_t>(n));
  std::vector<Work> work;
  for (int k = kLo; k <= kHi; ++k) {
    const int r = avail - k;
    for (int d : {k, r}) {
      if (present[d].empty()) present[d] = classes(d, true);
    }
    for (int g = 0; g < nGates; ++g) {
      for (std::size_t j : present[r]) work.push_back({k, g, j});
    }
  }

  const int threads = thread_count();
  std::vector<std::vector<TableEntry>> local(static_cast<std::size_t>(threads),
                                             std::vector<TableEntry>(grid_.size()));
  std::vector<std::uint64_t> evals(static_cast<std::size_t>(threads), 0);
  const std::int64_t total = static_cast<std::int64_t>(work.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t wi = 0; wi < total; ++wi) {
    const Work& item = work[static_cast<std::size_t>(wi)];
    const int tid = thread_id();
    auto& dst = local[static_cast<std::size_t>(tid)];
    const int r = avail - item.k;
    const TableEntry& right = table(r, true)[item.j];
    const auto bound = maps[item.gate].bind_second(right.state);
    // Same arithmetic as connect_time, hoisted.
    const double tRight = std::max(right.time, gateTime[item.gate]);
    const double signal = km / hp_.signalSpeed;
    const auto& leftTable = table(item.k, true);
    evals[static_cast<std::size_t>(tid)] += present[item.k].size();
    for (std::size_t i : present[item.k]) {
      const TableEntry& left = leftTable[i];
      const BellDiagonalState st = sorted_state(bound_raw(bound, left.state));
      std::size_t cls = 0;
      if (!classify_into(st, cls)) continue;
      const double t = std::max(left.time, tRight) + signal;
      if (dst[cls].valid && t > dst[cls].time) continue;
      TableEntry e;
      e.valid = true;
      e.state = st;
      e.time = t;
      e.occupancy = occupancy_connect(left.occupancy, right.occupancy, !ctsl);
      if (opts_.enforceOccupancy && e.occupancy.peak() > budget_) continue;
      e.nodes = left.nodes + right.nodes + (ctsl ? 1.0 : 0.0) + 1.0;
      e.origin = {Origin::Connect, item.k, static_cast<int>(i), static_cast<int>(item.j),
                  ctsl ? item.gate : -1, 0, 0};
      if (!dst[cls].valid || better(e, dst[cls])) dst[cls] = e;
    }
  }

  auto& out = table(n, false);
  for (int t = 0; t < threads; ++t) {
    stats_.connectEvaluations += evals[static_cast<std::size_t>(t)];
    for (std::size_t c = 0; c < out.size(); ++c) {
      const TableEntry& e = local[static_cast<std::size_t>(t)][c];
      if (e.valid && (!out[c].valid || better(e, out[c]))) out[c] = e;
    }
  }
}

void Planner::sweep_pump(int n) {
  const bool ctsl = opts_.scheme == Scheme::CTSL;
  auto& out = table(n, true);
  const auto& targets = table(n, false);
  std::vector<std::size_t> targetClasses;
  for (std::size_t c = 0; c < targets.size(); ++c) {
    if (!targets[c].valid) continue;
    targetClasses.push_back(c);
    TableEntry e = targets[c];
    e.origin = {Origin::Pump, static_cast<int>(c), n, static_cast<int>(c), -1, 0, 0};
    out[c] = e;
  }
  if (opts_.mMax == 0 || targetClasses.empty()) return;

  // CTSL elementary pairs are pumped locally like BDCZ pairs.
  const bool remote = ctsl && n != bridge_;
  const int sd = remote ? n - 2 * bridge_ : n;
  if (sd < 1) return;
  if (remote && gateOptions_.empty()) return;

  struct Source {
    std::size_t cls;
    int purified;
  };
  std::vector<Source> sources;
  for (std::size_t c : classes(sd, false)) sources.push_back({c, 0});
  if (remote && opts_.allowMultiLevelPumping) {
    for (std::size_t c : classes(sd, true)) {
      if (table(sd, true)[c].origin.m > 0) sources.push_back({c, 1});
    }
  }

  const int nGates = remote ? static_cast<int>(gateOptions_.size()) : 1;
  std::vector<PumpMap> maps;
  std::vector<double> gateTime;
  for (int g = 0; g < nGates; ++g) {
    if (remote) {
      const TableEntry& ge = table(bridge_, true)[gateOptions_[g]];
      maps.push_back(make_pump_map(hp_, ge.state));
      gateTime.push_back(ge.time);
    } else {
      maps.push_back(make_pump_map(hp_));
      gateTime.push_back(0.0);
    }
  }
  const double km = n * opts_.distanceUnit;

  const int threads = thread_count();
  std::vector<std::vector<TableEntry>> local(static_cast<std::size_t>(threads),
                                             std::vector<TableEntry>(grid_.size()));
  std::vector<std::uint64_t> evals(static_cast<std::size_t>(threads), 0);
  const std::int64_t total = static_cast<std::int64_t>(sources.size()) * nGates;

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t wi = 0; wi < total; ++wi) {
    const Source& src = sources[static_cast<std::size_t>(wi / nGates)];
    const int g = static_cast<int>(wi % nGates);
    const int tid = thread_id();
    auto& dst = local[static_cast<std::size_t>(tid)];
    const TableEntry& s = table(sd, src.purified != 0)[src.cls];
    const auto bound = maps[g].bind_second(s.state);
    const double srcTime = std::max(s.time, gateTime[g]);
    const double signal = km / hp_.signalSpeed;
    const double extraNodes = s.nodes + (remote ? 1.0 : 0.0) + 1.0;
    for (std::size_t tc : targetClasses) {
      const TableEntry& t0 = targets[tc];
      BellDiagonalState cur = t0.state;
      double time = t0.time;
      Occupancy occ = t0.occupancy;
      double nodes = t0.nodes;
      for (int m = 1; m <= opts_.mMax; ++m) {
        ++evals[static_cast<std::size_t>(tid)];
        const PumpOutcome po = normalized_outcome(bound_raw(bound, cur));
        if (!(po.successProb > 0)) break;
        time = (time + srcTime + signal) / po.successProb;  // pump_time, hoisted
        occ = occupancy_pump(occ, s.occupancy, !ctsl);
        nodes += extraNodes;
        cur = po.state;
        if (opts_.enforceOccupancy && occ.peak() > budget_) break;
        std::size_t cls = 0;
        if (!classify_into(cur, cls)) continue;
        if (dst[cls].valid && time > dst[cls].time) continue;
        TableEntry e;
        e.valid = true;
        e.state = cur;
        e.time = time;
        e.occupancy = occ;
        e.nodes = nodes;
        e.origin = {Origin::Pump, static_cast<int>(tc), sd, static_cast<int>(src.cls),
                    remote ? g : -1, src.purified, m};
        if (!dst[cls].valid || better(e, dst[cls])) dst[cls] = e;
      }
    }
  }

  for (int t = 0; t < threads; ++t) {
    stats_.pumpEvaluations += evals[static_cast<std::size_t>(t)];
    for (std::size_t c = 0; c < out.size(); ++c) {
      const TableEntry& e = local[static_cast<std::size_t>(t)][c];
      if (e.valid && (!out[c].valid || better(e, out[c]))) out[c] = e;
    }
  }
}

NodePtr Planner::gate_node(int option, int offset) const {
  return build(bridge_, true, gateOptions_.at(static_cast<std::size_t>(option)), offset);
}

NodePtr Planner::build(int n, bool purified, std::size_t cls, int offset) const {
  const auto memoKey = std::make_tuple(n, purified, cls, offset);
  if (auto it = memo_.find(memoKey); it != memo_.end()) return it->second;
  const TableEntry& e = table(n, purified).at(cls);
  if (!e.valid) throw ProtocolError("planner: no entry for the requested class");
  const Origin& o = e.origin;
  NodePtr node;
  if (purified) {
    node = build(n, false, static_cast<std::size_t>(o.a), offset);
    if (o.m > 0) {
      const int shift = (n - o.b) / 2;
      NodePtr src = build(o.b, o.e != 0, static_cast<std::size_t>(o.c), offset + shift);
      NodePtr gate = o.d >= 0 ? gate_node(o.d, offset) : nullptr;
      for (int m = 0; m < o.m; ++m) node = make_pump(node, src, gate, hp_, layout_);
    }
  } else if (o.kind == Origin::Leaf) {
    node = make_generate({offset, offset + n}, e.tau, hp_, layout_);
  } else {
    const int gap = o.d >= 0 ? bridge_ : 0;
    const int r = n - o.a - gap;
    NodePtr left = build(o.a, true, static_cast<std::size_t>(o.b), offset);
    NodePtr right = build(r, true, static_cast<std::size_t>(o.c), offset + o.a + gap);
    NodePtr gate = o.d >= 0 ? gate_node(o.d, offset + o.a) : nullptr;
    node = make_connect(left, right, gate, hp_, layout_);
  }
  memo_.emplace(memoKey, node);
  return node;
}

NodePtr Planner::materialize(int n, bool purified, std::size_t cls) const {
  return build(n, purified, cls, 0);
}

std::optional<Plan> Planner::query(double km, double fidelity) const {
  const int n0 = units_for(km);
  if (n0 > nMax_) throw ConfigError("planner: table does not cover " + std::to_string(km) + " km");
  const TableEntry* best = nullptr;
  int bestN = 0;
  std::size_t bestCls = 0;
  for (int n = n0; n <= std::min(nMax_, n0 + extra_); ++n) {
    const auto& t = table(n, true);
    for (std::size_t c = 0; c < t.size(); ++c) {
      if (!t[c].valid || t[c].state.f[0] < fidelity) continue;
      if (!best || better(t[c], *best)) {
        best = &t[c];
        bestN = n;
        bestCls = c;
      }
    }
  }
  if (!best) return std::nullopt;
  Plan plan;
  plan.protocol = {layout_, materialize(bestN, true, bestCls)};
  plan.state = plan.protocol.root->state;
  plan.avgTime = plan.protocol.root->avgTime;
  plan.distanceUnits = bestN;
  return plan;
}

double Planner::max_fidelity(double km) const {
  const int n0 = units_for(km);
  double best = 0.0;
  for (int n = n0; n <= std::min(nMax_, n0 + extra_); ++n) {
    for (const auto& e : table(n, true)) {
      if (e.valid) best = std::max(best, e.state.f[0]);
    }
  }
  return best;
}

std::optional<Plan> optimize(double km, double fidelity, const HardwareParams& hp,
                             const ClassGrid& grid, const PlannerOptions& opts) {
  Planner planner(hp, grid, opts);
  const int n = planner.units_for(km);
  const int extra = opts.extraDistance >= 0
                        ? opts.extraDistance
                        : (opts.scheme == Scheme::CTSL ? planner.bridge_units() : 0);
  planner.fill(n + extra);
  return planner.query(km, fidelity);
}

}  // namespace qrep
