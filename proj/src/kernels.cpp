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

#include "qrepeater/kernels.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "qrepeater/oracle.hpp"

namespace qrep {

namespace {

// Coefficients of the circuits with respect to the Bell populations of the
// inputs and the Pauli error index after each CNOT. They are linear in every
// argument, so evaluating the oracle on basis inputs determines them exactly.
struct CircuitTables {
  // connect[((k * 4 + i) * 4 + j) * 16 + q]
  std::array<double, 4 * 4 * 4 * 16> connect{};
  // pump[(((k * 4 + i) * 4 + j) * 16 + qa) * 16 + qb]
  std::vector<double> pump = std::vector<double>(4 * 4 * 4 * 16 * 16);
};

BellDiagonalState basis_state(int i) {
  BellDiagonalState s;
  s.f = {0.0, 0.0, 0.0, 0.0};
  s.f[i] = 1.0;
  return s;
}

TwoQubitChannel pauli_after_cnot(int q) {
  TwoQubitChannel ch;
  ch.gate = cnot_gate();
  ch.pauliWeights.fill(0.0);
  ch.pauliWeights[q] = 1.0;
  return ch;
}

std::shared_ptr<const CircuitTables> build_tables(double eta) {
  auto t = std::make_shared<CircuitTables>();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int q = 0; q < 16; ++q) {
        const auto out = oracle::connect_circuit(basis_state(i), basis_state(j),
                                                 pauli_after_cnot(q), eta);
        for (int k = 0; k < 4; ++k) t->connect[((k * 4 + i) * 4 + j) * 16 + q] = out[k];
      }
      for (int qa = 0; qa < 16; ++qa) {
        for (int qb = 0; qb < 16; ++qb) {
          const auto out = oracle::pump_circuit(basis_state(i), basis_state(j),
                                                pauli_after_cnot(qa), pauli_after_cnot(qb), eta);
          for (int k = 0; k < 4; ++k) {
            t->pump[(((k * 4 + i) * 4 + j) * 16 + qa) * 16 + qb] = out[k];
          }
        }
      }
    }
  }
  return t;
}

std::shared_ptr<const CircuitTables> tables_for(double eta) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const CircuitTables>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[eta];
  if (!slot) slot = build_tables(eta);
  return slot;
}

// Teleported-CNOT Pauli weights are linear in the gate pair populations.
std::array<std::array<double, 16>, 4> teleport_table(const HardwareParams& hp) {
  static std::mutex mu;
  static std::map<std::pair<double, double>, std::array<std::array<double, 16>, 4>> cache;
  std::lock_guard lock(mu);
  const auto key = std::make_pair(hp.gateReliability, hp.measurementReliability);
  auto it = cache.find(key);
  if (it == cache.end()) {
    std::array<std::array<double, 16>, 4> t{};
    for (int g = 0; g < 4; ++g) t[g] = oracle::teleported_cnot_weights(basis_state(g), hp);
    it = cache.emplace(key, t).first;
  }
  return it->second;
}

void check_cnot(const TwoQubitChannel& ch) {
  if (ch.gate != cnot_gate()) {
    throw std::invalid_argument("kernel tables are defined for CNOT-based channels only");
  }
}

}  // namespace


std::array<double, 16> ConnectMap::bind_second(const BellDiagonalState& b) const {
  std::array<double, 16> m{};
  for (int k = 0; k < 16; ++k) {
    const double* row = &coeff_[k * 4];
    m[k] = row[0] * b.f[0] + row[1] * b.f[1] + row[2] * b.f[2] + row[3] * b.f[3];
  }
  return m;
}

std::array<double, 4> ConnectMap::raw(const BellDiagonalState& a,
                                      const BellDiagonalState& b) const {
  return bound_raw(bind_second(b), a);
}

BellDiagonalState ConnectMap::operator()(const BellDiagonalState& a,
                                         const BellDiagonalState& b) const {
  return sorted_state(raw(a, b));
}

std::array<double, 16> PumpMap::bind_second(const BellDiagonalState& source) const {
  std::array<double, 16> m{};
  for (int k = 0; k < 16; ++k) {
    const double* row = &coeff_[k * 4];
    m[k] = row[0] * source.f[0] + row[1] * source.f[1] + row[2] * source.f[2] + row[3] * source.f[3];
  }
  return m;
}

std::array<double, 4> PumpMap::raw(const BellDiagonalState& target,
                                   const BellDiagonalState& source) const {
  return bound_raw(bind_second(source), target);
}

PumpOutcome normalized_outcome(std::array<double, 4> kept) {
  const double prob = kept[0] + kept[1] + kept[2] + kept[3];
  for (double& x : kept) x /= prob;
  return {sorted_state(kept), prob};
}

PumpOutcome PumpMap::operator()(const BellDiagonalState& target,
                                const BellDiagonalState& source) const {
  return normalized_outcome(raw(target, source));
}

TwoQubitChannel teleported_gate_channel(const BellDiagonalState& gatePair,
                                        const HardwareParams& hp) {
  const auto table = teleport_table(hp);
  TwoQubitChannel ch;
  ch.gate = cnot_gate();
  ch.pauliWeights.fill(0.0);
  for (int g = 0; g < 4; ++g) {
    for (int q = 0; q < 16; ++q) ch.pauliWeights[q] += gatePair.f[g] * table[g][q];
  }
  return ch;
}

TwoQubitChannel cnot_channel(const HardwareParams& hp,
                             const std::optional<BellDiagonalState>& gatePair) {
  if (gatePair) return teleported_gate_channel(*gatePair, hp);
  return depolarized_gate_channel(cnot_gate(), hp.gateReliability);
}

ConnectMap make_connect_map(const HardwareParams& hp,
                            const std::optional<BellDiagonalState>& gatePair) {
  const TwoQubitChannel ch = cnot_channel(hp, gatePair);
  check_cnot(ch);
  const auto tables = tables_for(hp.measurementReliability);
  std::array<double, 64> c{};
  for (int kij = 0; kij < 64; ++kij) {
    double acc = 0.0;
    for (int q = 0; q < 16; ++q) acc += tables->connect[kij * 16 + q] * ch.pauliWeights[q];
    c[kij] = acc;
  }
  return ConnectMap(c);
}

PumpMap make_pump_map(const HardwareParams& hp,
                      const std::optional<BellDiagonalState>& gatePair) {
  const TwoQubitChannel ch = cnot_channel(hp, gatePair);
  check_cnot(ch);
  const auto tables = tables_for(hp.measurementReliability);
  std::array<double, 64> c{};
  for (int kij = 0; kij < 64; ++kij) {
    double acc = 0.0;
    for (int qa = 0; qa < 16; ++qa) {
      if (ch.pauliWeights[qa] == 0.0) continue;
      const double* row = &tables->pump[(kij * 16 + qa) * 16];
      double inner = 0.0;
      for (int qb = 0; qb < 16; ++qb) inner += row[qb] * ch.pauliWeights[qb];
      acc += ch.pauliWeights[qa] * inner;
    }
    c[kij] = acc;
  }
  return PumpMap(c);
}

BellDiagonalState connect(const BellDiagonalState& a, const BellDiagonalState& b,
                          const HardwareParams& hp,
                          const std::optional<BellDiagonalState>& gatePair) {
  return make_connect_map(hp, gatePair)(a, b);
}

PumpOutcome pump(const BellDiagonalState& target, const BellDiagonalState& source,
                 const HardwareParams& hp,
                 const std::optional<BellDiagonalState>& gatePair) {
  return make_pump_map(hp, gatePair)(target, source);
}

}  // namespace qrep
