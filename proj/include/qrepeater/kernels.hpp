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

#include <array>
#include <optional>
#include <utility>

#include "qrepeater/noise.hpp"
#include "qrepeater/states.hpp"

namespace qrep {

/// Connection as a bilinear map on Bell populations:
/// out_k = sum_ij coeff[16k + 4i + j] a_i b_j, for a fixed hardware setting
/// and gate channel.
class ConnectMap {
 public:
  explicit ConnectMap(const std::array<double, 64>& coeff) : coeff_(coeff) {}

  /// Labelled output populations of canonical inputs.
  [[nodiscard]] std::array<double, 4> raw(const BellDiagonalState& a,
                                          const BellDiagonalState& b) const;
  /// Canonical output state.
  [[nodiscard]] BellDiagonalState operator()(const BellDiagonalState& a,
                                             const BellDiagonalState& b) const;

  /// Coefficients with the second input folded in; bound_raw(bind_second(b), a)
  /// equals raw(a, b) bit for bit.
  [[nodiscard]] std::array<double, 16> bind_second(const BellDiagonalState& b) const;

 private:
  std::array<double, 64> coeff_;
};

/// Purification as a bilinear map giving the unnormalized kept branch.
class PumpMap {
 public:
  explicit PumpMap(const std::array<double, 64>& coeff) : coeff_(coeff) {}

  [[nodiscard]] std::array<double, 4> raw(const BellDiagonalState& target,
                                          const BellDiagonalState& source) const;
  [[nodiscard]] PumpOutcome operator()(const BellDiagonalState& target,
                                       const BellDiagonalState& source) const;

  [[nodiscard]] std::array<double, 16> bind_second(const BellDiagonalState& source) const;

 private:
  std::array<double, 64> coeff_;
};

/// CNOT teleported through `gatePair` with the hardware's local gate and
/// measurement noise; exactly CNOT when the pair is perfect and p = eta = 1.
TwoQubitChannel teleported_gate_channel(const BellDiagonalState& gatePair,
                                        const HardwareParams& hp);

/// Depolarized local CNOT, or the teleported CNOT when a gate pair is given.
TwoQubitChannel cnot_channel(const HardwareParams& hp,
                             const std::optional<BellDiagonalState>& gatePair);

ConnectMap make_connect_map(const HardwareParams& hp,
                            const std::optional<BellDiagonalState>& gatePair = std::nullopt);
PumpMap make_pump_map(const HardwareParams& hp,
                      const std::optional<BellDiagonalState>& gatePair = std::nullopt);

/// Entanglement connection of a and b through a Bell measurement. Without a
/// gate pair the CNOT is local (depolarized); with one it is teleported.
BellDiagonalState connect(const BellDiagonalState& a, const BellDiagonalState& b,
                          const HardwareParams& hp,
                          const std::optional<BellDiagonalState>& gatePair = std::nullopt);

/// One round of parity-check purification of `target` by `source`.
PumpOutcome pump(const BellDiagonalState& target, const BellDiagonalState& source,
                 const HardwareParams& hp,
                 const std::optional<BellDiagonalState>& gatePair = std::nullopt);

/// Applies coefficients produced by bind_second to the first input.
inline std::array<double, 4> bound_raw(const std::array<double, 16>& m,
                                       const BellDiagonalState& a) {
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) acc += a.f[i] * m[k * 4 + i];
    out[k] = acc;
  }
  return out;
}

/// Normalizes a kept pumping branch; returns the success probability.
PumpOutcome normalized_outcome(std::array<double, 4> kept);

/// Sorts four non-negative populations descending (no validation); used on
/// kernel outputs that are known to be physical.
inline BellDiagonalState sorted_state(std::array<double, 4> f) {
  for (double& x : f) x = x < 0.0 ? 0.0 : x;
  auto cswap = [&](int i, int j) {
    if (f[i] < f[j]) std::swap(f[i], f[j]);
  };
  cswap(0, 1);
  cswap(2, 3);
  cswap(0, 2);
  cswap(1, 3);
  cswap(1, 2);
  return {f};
}

}  // namespace qrep
