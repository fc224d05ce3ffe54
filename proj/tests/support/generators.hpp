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

// Hand-rolled generators for property tests.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>

#include "qrepeater/states.hpp"

namespace qrep::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Uniform on the probability simplex (sorted spacings), then sorted.
  BellDiagonalState any_state() {
    std::array<double, 3> cut{uniform(), uniform(), uniform()};
    std::sort(cut.begin(), cut.end());
    BellDiagonalState s{{cut[0], cut[1] - cut[0], cut[2] - cut[1], 1.0 - cut[2]}};
    return canonicalize(s);
  }

  // Canonical state with fidelity in [lo, hi) and a random error split.
  BellDiagonalState state_with_fidelity(double lo, double hi) {
    const double f = uniform(lo, hi);
    std::array<double, 2> cut{uniform(), uniform()};
    std::sort(cut.begin(), cut.end());
    const double err = 1.0 - f;
    BellDiagonalState s{{f, err * cut[0], err * (cut[1] - cut[0]), err * (1.0 - cut[1])}};
    std::sort(s.f.begin() + 1, s.f.end(), std::greater<>());
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace qrep::testing
