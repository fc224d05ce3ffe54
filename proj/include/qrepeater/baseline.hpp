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

#include <optional>
#include <vector>

#include "qrepeater/noise.hpp"
#include "qrepeater/protocol.hpp"

namespace qrep {

struct BaselinePlan {
  Protocol protocol;
  int pumpSteps = 0;
  double avgTime = 0.0;
  BellDiagonalState state;
};

struct BaselineOptions {
  std::optional<int> pumpSteps;  ///< fixed m; otherwise the smallest that works
  int maxPumpSteps = 8;
  double bdczLeafFidelity = 0.96;
  double ctslLeafFidelity = 0.99;
};

/// Doubling protocol: N = 2^p + r segments are joined as B(2^p) + B(r),
/// every connection followed by m pumping rounds with a same-distance
/// unpurified pair. Leaves have fixed fidelity.
NodePtr bdcz_baseline_tree(int segments, int m, const HardwareParams& hp,
                           const BaselineOptions& opts = {});

/// CTSL protocol over an odd number of segments n: two odd halves joined
/// across one segment with a gate pair, then m pumping rounds with the
/// unpurified pair over n - 2.
NodePtr ctsl_baseline_tree(int segments, int m, const HardwareParams& hp,
                           const BaselineOptions& opts = {});

/// Smallest constant m (or the fixed one) whose protocol reaches
/// `fidelity`; nullopt when none does.
std::optional<BaselinePlan> unoptimized_bdcz(double km, double fidelity, const HardwareParams& hp,
                                             const BaselineOptions& opts = {});
/// As above; an even segment count is rounded up to the next odd one.
std::optional<BaselinePlan> unoptimized_ctsl(double km, double fidelity, const HardwareParams& hp,
                                             const BaselineOptions& opts = {});
/// One protocol per pump count in the configured range (a single one when
/// m is fixed), in increasing m.
std::vector<BaselinePlan> baseline_candidates(Scheme scheme, double km, const HardwareParams& hp,
                                              const BaselineOptions& opts = {});

/// First candidate reaching `fidelity`.
std::optional<BaselinePlan> pick_baseline(const std::vector<BaselinePlan>& candidates,
                                          double fidelity);

std::optional<BaselinePlan> unoptimized(Scheme scheme, double km, double fidelity,
                                        const HardwareParams& hp,
                                        const BaselineOptions& opts = {});

}  // namespace qrep
