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

#include "qrepeater/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "qrepeater/errors.hpp"

namespace qrep::oracle {

namespace {

using Index = Eigen::Index;

int bit_position(int qubits, int q) { return qubits - 1 - q; }

// Scatters the bits of `sub` (most significant first) onto `targets`.
Index spread(Index sub, const std::vector<int>& targets, int qubits) {
  Index out = 0;
  const int m = static_cast<int>(targets.size());
  for (int j = 0; j < m; ++j) {
    if ((sub >> (m - 1 - j)) & 1) out |= Index{1} << bit_position(qubits, targets[j]);
  }
  return out;
}

Index target_mask(const std::vector<int>& targets, int qubits) {
  Index mask = 0;
  for (int t : targets) mask |= Index{1} << bit_position(qubits, t);
  return mask;
}

Matrix to_matrix(const Matrix4& u) {
  Matrix m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = u[r * 4 + c];
  return m;
}

Matrix pauli(int k) {
  Matrix m = Matrix::Zero(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::VectorXcd bell_vector(int k) {
  // (I (x) P_k)|Phi+>
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  Matrix op = Eigen::kroneckerProduct(pauli(0), pauli(k)).eval();
  return op * phi;
}

int qubit_count(Index dim) {
  int n = 0;
  while ((Index{1} << n) < dim) ++n;
  return n;
}

}  // namespace

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)), qubits_(qubit_count(rho_.rows())) {
  if (rho_.rows() != rho_.cols() || (Index{1} << qubits_) != rho_.rows() || qubits_ < 1 ||
      qubits_ > kMaxQubits) {
    throw DimensionMismatch("density matrix must be square with dimension 2^k, k <= 8");
  }
}

DensityMatrix DensityMatrix::bell_diagonal(const BellDiagonalState& s) {
  Matrix rho = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXcd v = bell_vector(k);
    rho += s.f[k] * v * v.adjoint();
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::tensor(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.qubits() + b.qubits() > kMaxQubits) throw DimensionMismatch("too many qubits");
  Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
  for (Index i = 0; i < a.dim(); ++i)
    for (Index j = 0; j < a.dim(); ++j)
      out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = a.rho_(i, j) * b.rho_;
  return DensityMatrix(std::move(out));
}

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const Matrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::check_targets(const std::vector<int>& targets) const {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= qubits_) {
      std::ostringstream os;
      os << "target qubit " << targets[i] << " out of range for " << qubits_ << " qubits";
      throw DimensionMismatch(os.str());
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw DimensionMismatch("duplicate target qubit");
    }
  }
}

void DensityMatrix::apply_unitary(const Matrix& u, const std::vector<int>& targets) {
  check_targets(targets);
  const Index sub = Index{1} << targets.size();
  if (u.rows() != sub || u.cols() != sub) {
    throw DimensionMismatch("gate dimension does not match its target count");
  }
  const Index d = dim();
  const Index mask = target_mask(targets, qubits_);
  std::vector<Index> offs(static_cast<std::size_t>(sub));
  for (Index s = 0; s < sub; ++s) offs[s] = spread(s, targets, qubits_);

  Eigen::VectorXcd buf(sub);
  for (Index base = 0; base < d; ++base) {
    if (base & mask) continue;
    for (Index c = 0; c < d; ++c) {
      for (Index s = 0; s < sub; ++s) buf(s) = rho_(base | offs[s], c);
      for (Index s = 0; s < sub; ++s) rho_(base | offs[s], c) = (u.row(s) * buf)(0);
    }
  }
  const Matrix uc = u.conjugate();
  for (Index base = 0; base < d; ++base) {
    if (base & mask) continue;
    for (Index r = 0; r < d; ++r) {
      for (Index s = 0; s < sub; ++s) buf(s) = rho_(r, base | offs[s]);
      for (Index s = 0; s < sub; ++s) rho_(r, base | offs[s]) = (uc.row(s) * buf)(0);
    }
  }
}

void DensityMatrix::apply_pauli(int k, int qubit) { apply_unitary(pauli(k), {qubit}); }

void DensityMatrix::apply_hadamard(int qubit) {
  Matrix h(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  h << s, s, s, -s;
  apply_unitary(h, {qubit});
}

DensityMatrix DensityMatrix::reduced(const std::vector<int>& keep) const {
  check_targets(keep);
  std::vector<int> traced;
  for (int q = 0; q < qubits_; ++q) {
    if (std::find(keep.begin(), keep.end(), q) == keep.end()) traced.push_back(q);
  }
  const Index kd = Index{1} << keep.size();
  const Index td = Index{1} << traced.size();
  Matrix out = Matrix::Zero(kd, kd);
  for (Index r = 0; r < kd; ++r) {
    const Index rr = spread(r, keep, qubits_);
    for (Index c = 0; c < kd; ++c) {
      const Index cc = spread(c, keep, qubits_);
      Complex acc = 0.0;
      for (Index t = 0; t < td; ++t) {
        const Index tt = spread(t, traced, qubits_);
        acc += rho_(rr | tt, cc | tt);
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix DensityMatrix::traced_and_replaced(const std::vector<int>& targets) const {
  check_targets(targets);
  const Index d = dim();
  const Index mask = target_mask(targets, qubits_);
  const Index sub = Index{1} << targets.size();
  Matrix out = Matrix::Zero(d, d);
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      if ((r & mask) != (c & mask)) continue;
      Complex acc = 0.0;
      for (Index s = 0; s < sub; ++s) {
        const Index off = spread(s, targets, qubits_);
        acc += rho_((r & ~mask) | off, (c & ~mask) | off);
      }
      out(r, c) = acc;
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix& DensityMatrix::operator+=(const DensityMatrix& o) {
  if (o.dim() != dim()) throw DimensionMismatch("adding density matrices of different size");
  rho_ += o.rho_;
  return *this;
}

DensityMatrix& DensityMatrix::operator*=(double s) {
  rho_ *= s;
  return *this;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const TwoQubitChannel& ch,
                            const std::vector<int>& targets) {
  if (targets.size() != 2) throw DimensionMismatch("two-qubit channel needs two targets");
  DensityMatrix rotated = rho;
  rotated.apply_unitary(to_matrix(ch.gate), targets);
  DensityMatrix out(Matrix::Zero(rho.dim(), rho.dim()));
  for (int k = 0; k < 16; ++k) {
    if (ch.pauliWeights[k] == 0.0) continue;
    DensityMatrix term = rotated;
    term.apply_pauli(k / 4, targets[0]);
    term.apply_pauli(k % 4, targets[1]);
    term *= ch.pauliWeights[k];
    out += term;
  }
  return out;
}

DensityMatrix apply_depolarized_gate(const DensityMatrix& rho, const Matrix4& u, double p,
                                     const std::vector<int>& targets) {
  if (targets.size() != 2) throw DimensionMismatch("two-qubit gate needs two targets");
  DensityMatrix ideal = rho;
  ideal.apply_unitary(to_matrix(u), targets);
  ideal *= p;
  DensityMatrix noise = rho.traced_and_replaced(targets);
  noise *= (1.0 - p) / 4.0;
  ideal += noise;
  return ideal;
}

std::array<DensityMatrix, 2> measure(const DensityMatrix& rho, int qubit, double eta) {
  if (qubit < 0 || qubit >= rho.qubits()) throw DimensionMismatch("measured qubit out of range");
  const Index d = rho.dim();
  const Index bit = Index{1} << bit_position(rho.qubits(), qubit);
  Matrix p0 = Matrix::Zero(d, d);
  Matrix p1 = Matrix::Zero(d, d);
  const Matrix& m = rho.matrix();
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      if ((r & bit) != (c & bit)) continue;
      ((r & bit) ? p1 : p0)(r, c) = m(r, c);
    }
  }
  Matrix report0 = eta * p0 + (1.0 - eta) * p1;
  Matrix report1 = (1.0 - eta) * p0 + eta * p1;
  return {DensityMatrix(std::move(report0)), DensityMatrix(std::move(report1))};
}

std::array<double, 4> bell_populations(const DensityMatrix& pair) {
  if (pair.qubits() != 2) throw DimensionMismatch("Bell populations need a two-qubit state");
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    const Eigen::VectorXcd v = bell_vector(k);
    out[k] = (v.adjoint() * pair.matrix() * v)(0).real();
  }
  return out;
}

double bell_offdiagonal(const DensityMatrix& pair) {
  if (pair.qubits() != 2) throw DimensionMismatch("Bell populations need a two-qubit state");
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const Complex z = (bell_vector(i).adjoint() * pair.matrix() * bell_vector(j))(0);
      worst = std::max(worst, std::abs(z));
    }
  }
  return worst;
}

namespace {

// Measures `qubit` and applies `correct` to the branch reported as 1.
template <typename Correction>
DensityMatrix measure_and_correct(const DensityMatrix& rho, int qubit, double eta,
                                  Correction correct) {
  auto branches = measure(rho, qubit, eta);
  correct(branches[1]);
  branches[0] += branches[1];
  return branches[0];
}

// Teleports CNOT(control -> target) through the pair (commC, commT); commC
// sits with the control, commT with the target. The remote gate as a whole
// carries one depolarizing step of reliability p on (control, target); the
// local interactions with the communication qubits are otherwise ideal.
DensityMatrix teleport_cnot(const DensityMatrix& rho, int control, int target, int commC,
                            int commT, const HardwareParams& hp) {
  const Matrix4 cx = cnot_gate();
  const double eta = hp.measurementReliability;
  DensityMatrix s = apply_depolarized_gate(rho, cx, 1.0, {control, commC});
  s = measure_and_correct(s, commC, eta, [&](DensityMatrix& b) { b.apply_pauli(1, commT); });
  s = apply_depolarized_gate(s, cx, 1.0, {commT, target});
  s.apply_hadamard(commT);
  s = measure_and_correct(s, commT, eta, [&](DensityMatrix& b) { b.apply_pauli(3, control); });
  return apply_depolarized_gate(s, identity_gate(), hp.gateReliability, {control, target});
}

// Bell measurement on (m1, m2) after their CNOT has been applied; Pauli
// corrections go to `far`.
DensityMatrix finish_bell_measurement(const DensityMatrix& rho, int m1, int m2, int far,
                                      double eta) {
  DensityMatrix s = rho;
  s.apply_hadamard(m1);
  s = measure_and_correct(s, m2, eta, [&](DensityMatrix& b) { b.apply_pauli(1, far); });
  s = measure_and_correct(s, m1, eta, [&](DensityMatrix& b) { b.apply_pauli(3, far); });
  return s;
}

BellDiagonalState checked_pair(const DensityMatrix& pair, double norm) {
  if (bell_offdiagonal(pair) > 1e-10 * std::max(norm, 1e-300)) {
    throw NonBellDiagonalResidual("circuit output carries Bell-basis coherences");
  }
  BellDiagonalState s;
  s.f = bell_populations(pair);
  for (double& x : s.f) x /= norm;
  return s;
}

DensityMatrix pair_product(const BellDiagonalState& a, const BellDiagonalState& b) {
  return DensityMatrix::tensor(DensityMatrix::bell_diagonal(a), DensityMatrix::bell_diagonal(b));
}

}  // namespace

std::array<double, 4> connect_circuit(const BellDiagonalState& a, const BellDiagonalState& b,
                                      const TwoQubitChannel& gate, double eta) {
  DensityMatrix s = apply_channel(pair_product(a, b), gate, {1, 2});
  s = finish_bell_measurement(s, 1, 2, 3, eta);
  return bell_populations(s.reduced({0, 3}));
}

std::array<double, 4> pump_circuit(const BellDiagonalState& target,
                                   const BellDiagonalState& source,
                                   const TwoQubitChannel& gateA,
                                   const TwoQubitChannel& gateB, double eta) {
  DensityMatrix s = apply_channel(pair_product(target, source), gateA, {0, 2});
  s = apply_channel(s, gateB, {1, 3});
  auto a = measure(s, 2, eta);
  DensityMatrix kept(Matrix::Zero(s.dim(), s.dim()));
  for (int ra = 0; ra < 2; ++ra) {
    auto b = measure(a[ra], 3, eta);
    kept += b[ra];
  }
  return bell_populations(kept.reduced({0, 1}));
}

std::array<double, 16> teleported_cnot_weights(const BellDiagonalState& gatePair,
                                               const HardwareParams& hp) {
  // Qubits: RA=0, A=1, a=2, b=3, B=4, RB=5.
  const DensityMatrix phi = DensityMatrix::bell_diagonal(BellDiagonalState::perfect());
  DensityMatrix s = DensityMatrix::tensor(
      DensityMatrix::tensor(phi, DensityMatrix::bell_diagonal(gatePair)), phi);
  s = teleport_cnot(s, 1, 4, 2, 3, hp);
  const DensityMatrix out = s.reduced({0, 1, 4, 5});

  // Reference vectors P_k CNOT_{A->B} |Phi+>_{RA,A} |Phi+>_{B,RB}.
  Eigen::VectorXcd phi4 = Eigen::VectorXcd::Zero(16);
  phi4(0b0000) = phi4(0b0011) = phi4(0b1100) = phi4(0b1111) = 0.5;
  const Matrix id = pauli(0);
  auto on_ab = [&](const Matrix& opA, const Matrix& opB) -> Matrix {
    return Eigen::kroneckerProduct(
               Eigen::kroneckerProduct(id, opA).eval(),
               Eigen::kroneckerProduct(opB, id).eval())
        .eval();
  };
  Matrix cx = Matrix::Zero(16, 16);
  for (Index i = 0; i < 16; ++i) {
    const bool ctl = (i >> 2) & 1;  // A is bit position 2
    cx(ctl ? (i ^ 0b0010) : i, i) = 1.0;  // flips B (bit position 1)
  }
  const Eigen::VectorXcd base = cx * phi4;
  std::array<Eigen::VectorXcd, 16> refs;
  for (int k = 0; k < 16; ++k) refs[k] = on_ab(pauli(k / 4), pauli(k % 4)) * base;

  std::array<double, 16> w{};
  double coherence = 0.0;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      const Complex z = (refs[i].adjoint() * out.matrix() * refs[j])(0);
      if (i == j) {
        w[i] = z.real();
      } else {
        coherence = std::max(coherence, std::abs(z));
      }
    }
  }
  if (coherence > 1e-10) {
    throw NonBellDiagonalResidual("teleported gate is not a Pauli channel after CNOT");
  }
  return w;
}

BellDiagonalState simulate_connect(const BellDiagonalState& a, const BellDiagonalState& b,
                                   const HardwareParams& hp,
                                   const std::optional<BellDiagonalState>& gatePair) {
  const double eta = hp.measurementReliability;
  DensityMatrix s = pair_product(a, b);
  if (gatePair) {
    s = DensityMatrix::tensor(s, DensityMatrix::bell_diagonal(*gatePair));
    s = teleport_cnot(s, 1, 2, 4, 5, hp);
  } else {
    s = apply_depolarized_gate(s, cnot_gate(), hp.gateReliability, {1, 2});
  }
  s = finish_bell_measurement(s, 1, 2, 3, eta);
  return canonicalize(checked_pair(s.reduced({0, 3}), 1.0));
}

PumpOutcome simulate_pump(const BellDiagonalState& target, const BellDiagonalState& source,
                          const HardwareParams& hp,
                          const std::optional<BellDiagonalState>& gatePair) {
  const double eta = hp.measurementReliability;
  DensityMatrix s = pair_product(target, source);
  if (gatePair) {
    const DensityMatrix g = DensityMatrix::bell_diagonal(*gatePair);
    s = DensityMatrix::tensor(s, g);
    s = teleport_cnot(s, 0, 2, 4, 5, hp).reduced({0, 1, 2, 3});
    s = DensityMatrix::tensor(s, g);
    s = teleport_cnot(s, 1, 3, 4, 5, hp).reduced({0, 1, 2, 3});
  } else {
    s = apply_depolarized_gate(s, cnot_gate(), hp.gateReliability, {0, 2});
    s = apply_depolarized_gate(s, cnot_gate(), hp.gateReliability, {1, 3});
  }
  auto a = measure(s, 2, eta);
  DensityMatrix kept(Matrix::Zero(s.dim(), s.dim()));
  for (int ra = 0; ra < 2; ++ra) kept += measure(a[ra], 3, eta)[ra];
  const DensityMatrix pair = kept.reduced({0, 1});
  const double prob = pair.trace();
  return {canonicalize(checked_pair(pair, prob)), prob};
}

}  // namespace qrep::oracle
