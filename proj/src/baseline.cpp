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

#include "qrepeater/baseline.hpp"

#include <cmath>
#include <map>
#include <string>

#include "qrepeater/errors.hpp"

namespace qrep {

namespace {

int segments_for(double km, const HardwareParams& hp) {
  const double r = km / hp.baseSpacing;
  const double n = std::round(r);
  if (!(km > 0) || std::abs(r - n) > 1e-9 * std::max(1.0, r)) {
    throw ConfigError("baseline: distance " + std::to_string(km) +
                      " km is not a multiple of the base spacing");
  }
  return static_cast<int>(n);
}

Layout baseline_layout(Scheme scheme, const HardwareParams& hp) {
  Layout l;
  l.scheme = scheme;
  l.unitKm = hp.baseSpacing;
  l.bridgeUnits = 1;
  return l;
}

NodePtr leaf(int offset, int len, double fidelity, const HardwareParams& hp, const Layout& l) {
  const double tau = generation_time_for_fidelity(fidelity, len * l.unitKm, hp);
  return make_generate({offset, offset + len}, tau, hp, l);
}

NodePtr pumped(NodePtr target, const NodePtr& source, const NodePtr& gate, int m,
               const HardwareParams& hp, const Layout& l) {
  for (int i = 0; i < m; ++i) target = make_pump(target, source, gate, hp, l);
  return target;
}

class BdczBuilder {
 public:
  BdczBuilder(int m, const HardwareParams& hp, const BaselineOptions& o)
      : m_(m), hp_(hp), opts_(o), layout_(baseline_layout(Scheme::BDCZ, hp)) {}

  NodePtr build(int offset, int n) {
    if (n == 1) return leaf(offset, 1, opts_.bdczLeafFidelity, hp_, layout_);
    int big = 1;
    while (big * 2 < n) big *= 2;
    const int rest = n - big;
    NodePtr joined = make_connect(build(offset, big), build(offset + big, rest), nullptr, hp_,
                                  layout_);
    return pumped(joined, joined, nullptr, m_, hp_, layout_);
  }

 private:
  int m_;
  const HardwareParams& hp_;
  const BaselineOptions& opts_;
  Layout layout_;
};

class CtslBuilder {
 public:
  CtslBuilder(int m, const HardwareParams& hp, const BaselineOptions& o)
      : m_(m), hp_(hp), opts_(o), layout_(baseline_layout(Scheme::CTSL, hp)) {}

  // Purified pair over n (odd) segments starting at `offset`.
  NodePtr purified(int offset, int n) {
    if (n == 1) return leaf(offset, 1, opts_.ctslLeafFidelity, hp_, layout_);
    NodePtr target = unpurified(offset, n);
    NodePtr source = unpurified(offset + 1, n - 2);
    return pumped(target, source, gate(offset), m_, hp_, layout_);
  }

  // Connection of two odd halves across one segment.
  NodePtr unpurified(int offset, int n) {
    if (n == 1) return leaf(offset, 1, opts_.ctslLeafFidelity, hp_, layout_);
    const int half = (n - 1) / 2;
    const int k = half % 2 == 1 ? half : half - 1;
    const int rest = n - 1 - k;
    return make_connect(purified(offset, k), purified(offset + k + 1, rest), gate(offset + k),
                        hp_, layout_);
  }

 private:
  NodePtr gate(int offset) { return leaf(offset, 1, opts_.ctslLeafFidelity, hp_, layout_); }

  int m_;
  const HardwareParams& hp_;
  const BaselineOptions& opts_;
  Layout layout_;
};

}  // namespace

NodePtr bdcz_baseline_tree(int segments, int m, const HardwareParams& hp,
                           const BaselineOptions& opts) {
  if (segments < 1 || m < 0) throw ConfigError("baseline: invalid segment or pump count");
  return BdczBuilder(m, hp, opts).build(0, segments);
}

NodePtr ctsl_baseline_tree(int segments, int m, const HardwareParams& hp,
                           const BaselineOptions& opts) {
  if (segments < 1 || segments % 2 == 0 || m < 0) {
    throw ConfigError("baseline: CTSL needs an odd segment count and m >= 0");
  }
  return CtslBuilder(m, hp, opts).purified(0, segments);
}

std::vector<BaselinePlan> baseline_candidates(Scheme scheme, double km, const HardwareParams& hp,
                                              const BaselineOptions& opts) {
  int n = segments_for(km, hp);
  if (scheme == Scheme::CTSL && n % 2 == 0) ++n;
  const int lo = opts.pumpSteps ? *opts.pumpSteps : 0;
  const int hi = opts.pumpSteps ? *opts.pumpSteps : opts.maxPumpSteps;
  std::vector<BaselinePlan> out;
  for (int m = lo; m <= hi; ++m) {
    NodePtr root = scheme == Scheme::BDCZ ? bdcz_baseline_tree(n, m, hp, opts)
                                          : ctsl_baseline_tree(n, m, hp, opts);
    BaselinePlan plan;
    plan.protocol = {baseline_layout(scheme, hp), root};
    plan.pumpSteps = m;
    plan.avgTime = root->avgTime;
    plan.state = root->state;
    out.push_back(std::move(plan));
  }
  return out;
}

std::optional<BaselinePlan> pick_baseline(const std::vector<BaselinePlan>& candidates,
                                          double fidelity) {
  for (const auto& c : candidates) {
    if (c.state.fidelity() >= fidelity) return c;
  }
  return std::nullopt;
}

std::optional<BaselinePlan> unoptimized_bdcz(double km, double fidelity, const HardwareParams& hp,
                                             const BaselineOptions& opts) {
  return pick_baseline(baseline_candidates(Scheme::BDCZ, km, hp, opts), fidelity);
}

std::optional<BaselinePlan> unoptimized_ctsl(double km, double fidelity, const HardwareParams& hp,
                                             const BaselineOptions& opts) {
  return pick_baseline(baseline_candidates(Scheme::CTSL, km, hp, opts), fidelity);
}

std::optional<BaselinePlan> unoptimized(Scheme scheme, double km, double fidelity,
                                        const HardwareParams& hp, const BaselineOptions& opts) {
  return pick_baseline(baseline_candidates(scheme, km, hp, opts), fidelity);
}

}  // namespace qrep
