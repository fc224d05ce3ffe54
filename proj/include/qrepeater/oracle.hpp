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
#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qrepeater/noise.hpp"
#include "qrepeater/states.hpp"

namespace qrep::oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Dense density matrix on up to six qubits. Qubit 0 is the most
/// significant bit of the basis index.
class DensityMatrix {
 public:
  static constexpr int kMaxQubits = 8;

  explicit DensityMatrix(Matrix rho);

  /// Bell-diagonal pair on two qubits (see BellDiagonalState for labels).
  static DensityMatrix bell_diagonal(const BellDiagonalState& s);
  static DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

  [[nodiscard]] int qubits() const { return qubits_; }
  [[nodiscard]] Eigen::Index dim() const { return rho_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return rho_; }
  [[nodiscard]] double trace() const { return rho_.trace().real(); }
  [[nodiscard]] double hermiticity_error() const;
  [[nodiscard]] double min_eigenvalue() const;

  /// rho -> U rho U^dag with U acting on `targets` (first target is the most
  /// significant bit of U's index).
  void apply_unitary(const Matrix& u, const std::vector<int>& targets);
  void apply_pauli(int pauli, int qubit);
  void apply_hadamard(int qubit);

  /// Traces out every qubit not listed in `keep`; kept qubits retain order.
  [[nodiscard]] DensityMatrix reduced(const std::vector<int>& keep) const;

  /// Tr_targets[rho] (x) I_targets, with the identity unnormalized.
  [[nodiscard]] DensityMatrix traced_and_replaced(const std::vector<int>& targets) const;

  DensityMatrix& operator+=(const DensityMatrix& o);
  DensityMatrix& operator*=(double s);

 private:
  void check_targets(const std::vector<int>& targets) const;

  Matrix rho_;
  int qubits_;
};

/// Applies rho -> sum_k w_k P_k U rho U^dag P_k on `targets` (two qubits).
DensityMatrix apply_channel(const DensityMatrix& rho, const TwoQubitChannel& ch,
                            const std::vector<int>& targets);

/// The depolarizing gate model in its literal partial-trace form.
DensityMatrix apply_depolarized_gate(const DensityMatrix& rho, const Matrix4& u,
                                     double p, const std::vector<int>& targets);

/// Noisy Z measurement of `qubit` with reliability eta. Returns the two
/// unnormalized branches indexed by the reported outcome; the measured qubit
/// is left dephased in place.
std::array<DensityMatrix, 2> measure(const DensityMatrix& rho, int qubit, double eta);

/// Bell populations of a two-qubit state and the largest off-diagonal
/// Bell-basis magnitude.
std::array<double, 4> bell_populations(const DensityMatrix& pair);
double bell_offdiagonal(const DensityMatrix& pair);

/// Connection of (q0,q1) and (q2,q3) through a Bell measurement on q1,q2
/// whose CNOT is the given channel. Returns the labelled (non-canonical)
/// Bell populations of (q0,q3).
std::array<double, 4> connect_circuit(const BellDiagonalState& a, const BellDiagonalState& b,
                                      const TwoQubitChannel& gate, double eta);

/// Parity-check purification of target (q0,q1) by source (q2,q3) with
/// bilateral CNOTs gateA on (q0,q2) and gateB on (q1,q3). Returns the labelled
/// populations of the kept branch, unnormalized: their sum is the success
/// probability.
std::array<double, 4> pump_circuit(const BellDiagonalState& target,
                                   const BellDiagonalState& source,
                                   const TwoQubitChannel& gateA,
                                   const TwoQubitChannel& gateB, double eta);

/// Pauli weights of a CNOT teleported through `gatePair` with noisy
/// measurements and one depolarizing step of reliability p on the two
/// storage qubits, extracted from the six-qubit Choi state. The channel equals CNOT followed by these Pauli errors.
std::array<double, 16> teleported_cnot_weights(const BellDiagonalState& gatePair,
                                               const HardwareParams& hp);

/// Full connection circuit: local noisy CNOT without a gate pair, otherwise
/// the CNOT is teleported through `gatePair` (six qubits).
BellDiagonalState simulate_connect(const BellDiagonalState& a, const BellDiagonalState& b,
                                   const HardwareParams& hp,
                                   const std::optional<BellDiagonalState>& gatePair);

/// Full purification circuit; with a gate pair both bilateral CNOTs are
/// teleported, one end at a time.
PumpOutcome simulate_pump(const BellDiagonalState& target, const BellDiagonalState& source,
                          const HardwareParams& hp,
                          const std::optional<BellDiagonalState>& gatePair);

}  // namespace qrep::oracle
