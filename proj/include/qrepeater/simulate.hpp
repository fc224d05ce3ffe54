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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrepeater/noise.hpp"
#include "qrepeater/protocol.hpp"

namespace qrep {

/// Completion times of repeated protocol executions.
struct TimeDistribution {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> samples;  ///< in trial order
  double mean = 0.0;
  double stddev = 0.0;
  double median = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double fidelity = 0.0;  ///< deterministic under the Bell-diagonal model
  std::uint64_t pumpAttempts = 0;
  std::uint64_t pumpSuccesses = 0;
};

/// Executes the protocol `trials` times. Leaves retry attempts of length
/// 2 span / c with success probability t_att / tau (capped at 1); a failed
/// pumping round rebuilds its target from scratch. Trial i draws from its
/// own stream seeded by (seed, i), so results do not depend on threading.
TimeDistribution run(const Protocol& p, const HardwareParams& hp, std::uint64_t trials,
                     std::uint64_t seed);

struct Comparison {
  double mcMean = 0.0;
  double standardError = 0.0;
  double analyticTime = 0.0;
  double ratio = 0.0;
};

Comparison compare(const Protocol& p, const HardwareParams& hp, std::uint64_t trials,
                   std::uint64_t seed);

/// Shortest possible completion time: one attempt per leaf, every pumping
/// round succeeding, plus classical signalling along the deepest path.
double critical_path_bound(const Protocol& p, const HardwareParams& hp);

/// Quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

nlohmann::ordered_json to_json(const TimeDistribution& d, const Protocol& p);
void write_samples_csv(std::ostream& os, const TimeDistribution& d);

}  // namespace qrep
