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

#include "qrepeater/noise.hpp"

#include <cmath>
#include <sstream>

#include "qrepeater/errors.hpp"

namespace qrep {

void HardwareParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw ConfigError(std::string(name) + " must be positive and finite");
    }
  };
  auto reliability = [](double x, const char* name) {
    if (!(x > 0.0 && x <= 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1]");
  };
  positive(signalSpeed, "signal speed");
  positive(attenuationLength, "attenuation length");
  positive(baseSpacing, "base spacing");
  reliability(efficiency, "efficiency");
  reliability(measurementReliability, "measurement reliability");
  reliability(gateReliability, "gate reliability");
}

double min_generation_time(double span, const HardwareParams& hp) {
  return span / hp.signalSpeed * std::exp(span / hp.attenuationLength);
}

namespace {

double fidelity_exponent(const HardwareParams& hp) {
  return 2.0 * (1.0 - hp.efficiency) / hp.efficiency;
}

}  // namespace

double generation_fidelity(double tau, double span, const HardwareParams& hp) {
  const double tmin = min_generation_time(span, hp);
  if (!(tau >= tmin)) {
    std::ostringstream os;
    os << "generation time " << tau << " s below minimum " << tmin << " s for span "
       << span << " km";
    throw InfeasibleGenerationTime(os.str());
  }
  if (std::isinf(tau)) return 1.0;
  const double bracket = 1.0 - tmin / tau;
  const double k = fidelity_exponent(hp);
  if (k == 0.0) return bracket > 0.0 ? 1.0 : 0.5;
  return 0.5 * (1.0 + std::pow(bracket, k));
}

double generation_time_for_fidelity(double fidelity, double span,
                                    const HardwareParams& hp) {
  if (!(fidelity >= 0.5 && fidelity < 1.0)) {
    throw InfeasibleGenerationTime("target elementary fidelity must lie in [0.5, 1)");
  }
  const double tmin = min_generation_time(span, hp);
  const double k = fidelity_exponent(hp);
  if (k == 0.0) return std::nextafter(tmin, INFINITY);
  const double bracket = std::pow(2.0 * fidelity - 1.0, 1.0 / k);
  double tau = tmin / (1.0 - bracket);
  // Round-off may leave F0(tau) a hair under the target.
  while (generation_fidelity(tau, span, hp) < fidelity) tau = std::nextafter(tau, INFINITY);
  return tau;
}

BellDiagonalState state_with_fidelity(double fidelity, ErrorShape shape) {
  const double err = 1.0 - fidelity;
  if (shape == ErrorShape::Werner) return {{fidelity, err / 3.0, err / 3.0, err / 3.0}};
  return {{fidelity, err, 0.0, 0.0}};
}

BellDiagonalState generation_state(double tau, double span, const HardwareParams& hp) {
  return state_with_fidelity(generation_fidelity(tau, span, hp), hp.errorShape);
}

Matrix4 identity_gate() {
  Matrix4 u{};
  for (int i = 0; i < 4; ++i) u[i * 4 + i] = 1.0;
  return u;
}

Matrix4 cnot_gate() {
  Matrix4 u{};
  u[0 * 4 + 0] = 1.0;
  u[1 * 4 + 1] = 1.0;
  u[2 * 4 + 3] = 1.0;
  u[3 * 4 + 2] = 1.0;
  return u;
}

std::pair<Matrix2, Matrix2> measurement_operators(double eta) {
  Matrix2 p0{eta, 0.0, 0.0, 1.0 - eta};
  Matrix2 p1{1.0 - eta, 0.0, 0.0, eta};
  return {p0, p1};
}

TwoQubitChannel depolarized_gate_channel(const Matrix4& idealGate, double p) {
  // (1-p)/4 Tr[rho] (x) I equals a uniform mixture of the 16 two-qubit Paulis.
  TwoQubitChannel ch;
  ch.gate = idealGate;
  ch.pauliWeights.fill((1.0 - p) / 16.0);
  ch.pauliWeights[0] += p;
  return ch;
}

}  // namespace qrep
