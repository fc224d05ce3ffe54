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

// Exhaustive enumeration of BDCZ protocol trees for tiny instances.
//
// Walks the same grammar as the planner (leaves on bin edges, connections
// over every split, pump chains with a fixed unpurified source) but keeps
// every tree instead of one per state class. Subtrees slower than `bound`
// are dropped; that is safe because no parent finishes before its children.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "qrepeater/kernels.hpp"
#include "qrepeater/noise.hpp"
#include "qrepeater/protocol.hpp"
#include "qrepeater/states.hpp"

namespace qrep::testing {

struct Candidate {
  BellDiagonalState state;
  double time = 0.0;
  Occupancy occupancy;
};

struct ExhaustiveResult {
  double bestTime = std::numeric_limits<double>::infinity();
  std::uint64_t trees = 0;
  bool complete = true;  ///< false when the evaluation budget ran out
};

inline ExhaustiveResult exhaustive_bdcz(int n, double fidelity, const HardwareParams& hp,
                                        const ClassGrid& grid, int mMax, int skipCap,
                                        double unitKm, double bound,
                                        std::uint64_t maxEvaluations = 20'000'000) {
  const ConnectMap join = make_connect_map(hp);
  const PumpMap purify = make_pump_map(hp);
  const int budget = storage_budget(Scheme::BDCZ, n * unitKm, hp);
  auto keep = [&](const Candidate& c) {
    return c.state.f[0] >= 0.5 && c.time <= bound && c.occupancy.peak() <= budget;
  };
  auto by_time = [](const Candidate& x, const Candidate& y) { return x.time < y.time; };

  ExhaustiveResult res;
  std::uint64_t evaluations = 0;
  auto exhausted = [&] {
    if (++evaluations <= maxEvaluations) return false;
    res.complete = false;
    return true;
  };
  std::vector<std::vector<Candidate>> purified(static_cast<std::size_t>(n + 1));
  for (int len = 1; len <= n; ++len) {
    const double km = len * unitKm;
    std::vector<Candidate> plain;
    if (len <= skipCap) {
      const auto& edges = grid.fidelity_edges();
      for (std::size_t b = 0; b + 1 < edges.size(); ++b) {
        if (edges[b] >= 1.0) continue;
        const double tau = generation_time_for_fidelity(edges[b], km, hp);
        Candidate c{generation_state(tau, km, hp), tau, occupancy_leaf()};
        if (keep(c)) plain.push_back(c);
      }
    }
    const double signal = km / hp.signalSpeed;
    for (int k = 1; k < len; ++k) {
      for (const auto& a : purified[k]) {
        if (a.time + signal > bound) break;
        for (const auto& b : purified[len - k]) {
          if (b.time + signal > bound) break;
          if (exhausted()) return res;
          Candidate c{join(a.state, b.state), connect_time(a.time, b.time, 0.0, km, hp),
                      occupancy_connect(a.occupancy, b.occupancy, true)};
          if (keep(c)) plain.push_back(c);
        }
      }
    }
    std::sort(plain.begin(), plain.end(), by_time);
    auto& out = purified[len];
    out = plain;
    if (mMax > 0) {
      for (const auto& t : plain) {
        if (t.time + signal > bound) break;
        for (const auto& s : plain) {
          if (t.time + s.time + signal > bound) break;
          if (exhausted()) return res;
          Candidate cur = t;
          for (int m = 1; m <= mMax; ++m) {
            const PumpOutcome po = purify(cur.state, s.state);
            if (!(po.successProb > 0)) break;
            cur.time = pump_time(cur.time, s.time, 0.0, km, po.successProb, hp);
            cur.occupancy = occupancy_pump(cur.occupancy, s.occupancy, true);
            cur.state = po.state;
            if (cur.time > bound || cur.occupancy.peak() > budget) break;
            if (cur.state.f[0] < 0.5) continue;
            // The top level only needs the count and the best time.
            if (len < n) {
              out.push_back(cur);
            } else {
              ++res.trees;
              if (cur.state.f[0] >= fidelity) res.bestTime = std::min(res.bestTime, cur.time);
            }
          }
        }
      }
      if (len < n) std::sort(out.begin(), out.end(), by_time);
    }
  }
  for (const auto& c : purified[n]) {
    ++res.trees;
    if (c.state.f[0] >= fidelity) res.bestTime = std::min(res.bestTime, c.time);
  }
  return res;
}

}  // namespace qrep::testing
