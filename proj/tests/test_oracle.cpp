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

#include <doctest.h>

#include <cmath>

#include "qrepeater/errors.hpp"
#include "qrepeater/oracle.hpp"
#include "support/generators.hpp"

using namespace qrep;
using namespace qrep::oracle;

namespace {

HardwareParams ideal() {
  HardwareParams hp;
  hp.gateReliability = 1.0;
  hp.measurementReliability = 1.0;
  return hp;
}

}  // namespace

TEST_CASE("bell-diagonal density matrix is a valid state") {
  testing::Gen gen(1);
  for (int i = 0; i < 50; ++i) {
    const auto s = gen.any_state();
    const auto rho = DensityMatrix::bell_diagonal(s);
    CHECK(rho.trace() == doctest::Approx(1.0));
    CHECK(rho.hermiticity_error() < 1e-14);
    CHECK(rho.min_eigenvalue() > -1e-12);
    const auto back = bell_populations(rho);
    for (int k = 0; k < 4; ++k) CHECK(back[k] == doctest::Approx(s.f[k]).epsilon(1e-12));
    CHECK(bell_offdiagonal(rho) < 1e-14);
  }
}

TEST_CASE("partial trace keeps the marginal") {
  const auto a = DensityMatrix::bell_diagonal(BellDiagonalState::werner(0.8));
  const auto b = DensityMatrix::bell_diagonal(BellDiagonalState::werner(0.6));
  const auto ab = DensityMatrix::tensor(a, b);
  CHECK(ab.qubits() == 4);
  const auto back = bell_populations(ab.reduced({2, 3}));
  CHECK(back[0] == doctest::Approx(0.6));
}

TEST_CASE("depolarized gate on half of two perfect pairs") {
  const auto phi = DensityMatrix::bell_diagonal(BellDiagonalState::perfect());
  const auto s = apply_depolarized_gate(DensityMatrix::tensor(phi, phi), identity_gate(), 0.995,
                                        {1, 2});
  // p + (1 - p) / 4 for each pair.
  CHECK(bell_populations(s.reduced({0, 1}))[0] == doctest::Approx(0.99625).epsilon(1e-12));
}

TEST_CASE("ideal connection of Werner pairs") {
  const auto out = simulate_connect(BellDiagonalState::werner(0.9), BellDiagonalState::werner(0.9),
                                    ideal(), std::nullopt);
  // F1 F2 + (1 - F1)(1 - F2) / 3
  CHECK(out.fidelity() == doctest::Approx(0.81 + 0.01 / 3).epsilon(1e-12));
  CHECK(out.sum() == doctest::Approx(1.0));
}

TEST_CASE("ideal pumping of Werner pairs") {
  const auto out = simulate_pump(BellDiagonalState::werner(0.9), BellDiagonalState::werner(0.9),
                                 ideal(), std::nullopt);
  CHECK(out.state.fidelity() == doctest::Approx(0.926395939086).epsilon(1e-11));
  CHECK(out.successProb == doctest::Approx(0.875555555556).epsilon(1e-11));
}

TEST_CASE("ideal operations on perfect pairs stay perfect") {
  const auto p = BellDiagonalState::perfect();
  CHECK(simulate_connect(p, p, ideal(), std::nullopt).fidelity() == doctest::Approx(1.0));
  const auto po = simulate_pump(p, p, ideal(), std::nullopt);
  CHECK(po.state.fidelity() == doctest::Approx(1.0));
  CHECK(po.successProb == doctest::Approx(1.0));
  const auto w = teleported_cnot_weights(p, ideal());
  CHECK(w[0] == doctest::Approx(1.0));
}

TEST_CASE("teleported gate weights form a distribution") {
  testing::Gen gen(8);
  HardwareParams hp;
  for (int i = 0; i < 5; ++i) {
    const auto w = teleported_cnot_weights(gen.state_with_fidelity(0.5, 1.0), hp);
    double total = 0.0;
    for (double x : w) {
      CHECK(x >= -1e-14);
      total += x;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("noisy teleported gate is worse than a local gate") {
  const HardwareParams hp;
  const auto w = teleported_cnot_weights(BellDiagonalState::perfect(), hp);
  CHECK(w[0] < hp.gateReliability + (1 - hp.gateReliability) / 16);
  CHECK(w[0] > hp.gateReliability * hp.measurementReliability * hp.measurementReliability - 1e-3);
}

TEST_CASE("pump output fidelity improves on good inputs") {
  const HardwareParams hp;
  testing::Gen gen(12);
  for (int i = 0; i < 20; ++i) {
    const auto t = BellDiagonalState::werner(gen.uniform(0.8, 0.95));
    const auto po = simulate_pump(t, t, hp, std::nullopt);
    CHECK(po.state.fidelity() > t.fidelity());
    CHECK(po.successProb > 0.5);
    CHECK(po.successProb <= 1.0);
  }
}

TEST_CASE("dimension errors") {
  const auto a = DensityMatrix::bell_diagonal(BellDiagonalState::perfect());
  CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(3, 3)), DimensionMismatch);
  auto b = a;
  CHECK_THROWS_AS(b.apply_pauli(1, 5), DimensionMismatch);
  CHECK_THROWS_AS(apply_depolarized_gate(a, cnot_gate(), 0.9, {0}), DimensionMismatch);
  CHECK_THROWS_AS(bell_populations(DensityMatrix::tensor(a, a)), DimensionMismatch);
  CHECK_THROWS_AS(measure(a, 2, 0.9), DimensionMismatch);
}
