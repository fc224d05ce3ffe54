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

#include "qrepeater/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <unordered_map>

#include "qrepeater/errors.hpp"

namespace qrep {

namespace {

// Uniform in (0, 1) from the top 53 bits; avoids the library's
// implementation-defined distributions so streams are portable.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Protocol DAG flattened into an array; children precede parents.
struct Step {
  NodeKind kind = NodeKind::Generate;
  int first = -1;
  int second = -1;
  int gate = -1;
  double attempt = 0.0;  ///< leaves
  double logFail = 0.0;  ///< leaves: log(1 - q), 0 when every attempt succeeds
  double signal = 0.0;
  double successProb = 1.0;
};

class Executor {
 public:
  Executor(const Protocol& p, const HardwareParams& hp) : layout_(p.layout), hp_(hp) {
    root_ = add(p.root);
  }

  double sample(std::mt19937_64& rng, std::uint64_t& attempts, std::uint64_t& successes) const {
    return sample(root_, rng, attempts, successes);
  }

 private:
  double sample(int id, std::mt19937_64& rng, std::uint64_t& attempts,
                std::uint64_t& successes) const {
    const Step& s = steps_[static_cast<std::size_t>(id)];
    switch (s.kind) {
      case NodeKind::Generate: {
        if (s.logFail == 0.0) return s.attempt;
        const double k = 1.0 + std::floor(std::log(uniform_open(rng)) / s.logFail);
        return k * s.attempt;
      }
      case NodeKind::Connect: {
        double t = std::max(sample(s.first, rng, attempts, successes),
                            sample(s.second, rng, attempts, successes));
        if (s.gate >= 0) t = std::max(t, sample(s.gate, rng, attempts, successes));
        return t + s.signal;
      }
      case NodeKind::Pump: {
        double total = 0.0;
        for (;;) {
          const double target = sample(s.first, rng, attempts, successes);
          double source = sample(s.second, rng, attempts, successes);
          if (s.gate >= 0) source = std::max(source, sample(s.gate, rng, attempts, successes));
          total += target + source + s.signal;
          ++attempts;
          if (uniform_open(rng) < s.successProb) {
            ++successes;
            return total;
          }
        }
      }
    }
    return 0.0;
  }

  int add(const NodePtr& n) {
    if (!n) return -1;
    if (auto it = ids_.find(n.get()); it != ids_.end()) return it->second;
    Step s;
    s.kind = n->kind;
    s.first = add(n->first);
    s.second = add(n->second);
    s.gate = add(n->gate);
    s.signal = layout_.km(n->span) / hp_.signalSpeed;
    s.successProb = n->successProb;
    if (n->kind == NodeKind::Generate) {
      s.attempt = 2.0 * s.signal;
      const double q = std::min(1.0, s.attempt / n->tau);
      s.logFail = q >= 1.0 ? 0.0 : std::log1p(-q);
    }
    if (n->kind == NodeKind::Pump && !(n->successProb > 0.0)) {
      throw ProtocolError("pumping step with zero success probability never completes");
    }
    steps_.push_back(s);
    const int id = static_cast<int>(steps_.size()) - 1;
    ids_.emplace(n.get(), id);
    return id;
  }

  const Layout& layout_;
  const HardwareParams& hp_;
  std::vector<Step> steps_;
  std::unordered_map<const ProtocolNode*, int> ids_;
  int root_ = -1;
};

double bound_of(const ProtocolNode& n, const Layout& l, const HardwareParams& hp) {
  const double signal = l.km(n.span) / hp.signalSpeed;
  switch (n.kind) {
    case NodeKind::Generate:
      return 2.0 * signal;
    case NodeKind::Connect: {
      double t = std::max(bound_of(*n.first, l, hp), bound_of(*n.second, l, hp));
      if (n.gate) t = std::max(t, bound_of(*n.gate, l, hp));
      return t + signal;
    }
    case NodeKind::Pump: {
      double s = bound_of(*n.second, l, hp);
      if (n.gate) s = std::max(s, bound_of(*n.gate, l, hp));
      return bound_of(*n.first, l, hp) + s + signal;
    }
  }
  return 0.0;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

TimeDistribution run(const Protocol& p, const HardwareParams& hp, std::uint64_t trials,
                     std::uint64_t seed) {
  if (trials == 0) throw ConfigError("simulate: trials must be positive");
  const Executor exec(p, hp);
  TimeDistribution d;
  d.trials = trials;
  d.seed = seed;
  d.samples.assign(trials, 0.0);
  d.fidelity = p.root->state.fidelity();
  std::vector<std::uint64_t> attempts(trials, 0), successes(trials, 0);
  const auto count = static_cast<std::int64_t>(trials);

#pragma omp parallel for schedule(dynamic, 64)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32)};
    std::mt19937_64 rng(seq);
    d.samples[idx] = exec.sample(rng, attempts[idx], successes[idx]);
  }

  double sum = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    sum += d.samples[i];
    d.pumpAttempts += attempts[i];
    d.pumpSuccesses += successes[i];
  }
  d.mean = sum / static_cast<double>(trials);
  double sq = 0.0;
  for (double x : d.samples) sq += (x - d.mean) * (x - d.mean);
  d.stddev = trials > 1 ? std::sqrt(sq / static_cast<double>(trials - 1)) : 0.0;
  std::vector<double> sorted = d.samples;
  std::sort(sorted.begin(), sorted.end());
  d.min = sorted.front();
  d.max = sorted.back();
  d.median = quantile(sorted, 0.5);
  d.q05 = quantile(sorted, 0.05);
  d.q95 = quantile(sorted, 0.95);
  return d;
}

Comparison compare(const Protocol& p, const HardwareParams& hp, std::uint64_t trials,
                   std::uint64_t seed) {
  const TimeDistribution d = run(p, hp, trials, seed);
  Comparison c;
  c.mcMean = d.mean;
  c.standardError = d.stddev / std::sqrt(static_cast<double>(trials));
  c.analyticTime = p.root->avgTime;
  c.ratio = c.mcMean / c.analyticTime;
  return c;
}

double critical_path_bound(const Protocol& p, const HardwareParams& hp) {
  return bound_of(*p.root, p.layout, hp);
}

nlohmann::ordered_json to_json(const TimeDistribution& d, const Protocol& p) {
  nlohmann::ordered_json j;
  j["trials"] = d.trials;
  j["seed"] = d.seed;
  j["scheme"] = to_string(p.layout.scheme);
  j["distance_km"] = p.layout.km(p.root->span);
  j["fidelity"] = d.fidelity;
  j["analytic_time_s"] = p.root->avgTime;
  j["mean_s"] = d.mean;
  j["stddev_s"] = d.stddev;
  j["median_s"] = d.median;
  j["q05_s"] = d.q05;
  j["q95_s"] = d.q95;
  j["min_s"] = d.min;
  j["max_s"] = d.max;
  j["mean_over_analytic"] = d.mean / p.root->avgTime;
  j["pump_attempts"] = d.pumpAttempts;
  j["pump_successes"] = d.pumpSuccesses;
  return j;
}

void write_samples_csv(std::ostream& os, const TimeDistribution& d) {
  os << "trial,time_s\n";
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < d.samples.size(); ++i) os << i << ',' << d.samples[i] << '\n';
  os.precision(old);
}

}  // namespace qrep
