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
#include <utility>

#include "qrepeater/states.hpp"

namespace qrep {

enum class ErrorShape { Werner, Dephased };

/// Physical constants of the repeater hardware. Lengths in km, times in s.
struct HardwareParams {
  double signalSpeed = 2.0e5;        ///< c, light in fiber
  double attenuationLength = 20.0;   ///< L_att
  double efficiency = 0.2;           ///< photon collection and detection
  double measurementReliability = 0.995;  ///< eta
  double gateReliability = 0.995;         ///< p
  double baseSpacing = 10.0;         ///< L0
  ErrorShape errorShape = ErrorShape::Werner;

  /// Throws ConfigError unless lengths are positive and reliabilities in (0, 1].
  void validate() const;
};

/// Shortest generation time for which the scattering scheme can herald a
/// pair over `span`: (span / c) exp(span / L_att).
double min_generation_time(double span, const HardwareParams& hp);

/// Elementary pair fidelity F0 for generation time `tau`:
///   F0 = (1 + [1 - tau_min / tau]^(2 (1 - eps) / eps)) / 2.
/// Throws InfeasibleGenerationTime when tau < tau_min.
double generation_fidelity(double tau, double span, const HardwareParams& hp);

/// Inverse of generation_fidelity: the smallest tau with F0(tau) >= fidelity.
/// Requires fidelity in [0.5, 1).
double generation_time_for_fidelity(double fidelity, double span,
                                    const HardwareParams& hp);

/// Canonical elementary pair state: f1 = F0(tau) and the remainder spread
/// according to hp.errorShape.
BellDiagonalState generation_state(double tau, double span, const HardwareParams& hp);
BellDiagonalState state_with_fidelity(double fidelity, ErrorShape shape);

using Matrix2 = std::array<std::complex<double>, 4>;
using Matrix4 = std::array<std::complex<double>, 16>;  ///< row-major

/// CNOT with the first qubit as control; basis |c t>, c most significant.
Matrix4 cnot_gate();
Matrix4 identity_gate();

/// Two-qubit channel of the form rho -> sum_k w_k P_k U rho U^dag P_k, where
/// P_k = sigma_{k/4} (x) sigma_{k%4} over {I, X, Y, Z} on (first, second).
/// Both the depolarizing gate model and the teleported gate reduce to it.
struct TwoQubitChannel {
  Matrix4 gate = identity_gate();
  std::array<double, 16> pauliWeights{1.0};
};

/// Noisy measurement POVM {P0, P1}, each diagonal in the computational basis:
/// P0 = eta|0><0| + (1 - eta)|1><1|.
std::pair<Matrix2, Matrix2> measurement_operators(double eta);

/// U rho U^dag -> p U rho U^dag + (1 - p)/4 Tr_ij[rho] (x) I_ij.
TwoQubitChannel depolarized_gate_channel(const Matrix4& idealGate, double p);

}  // namespace qrep
