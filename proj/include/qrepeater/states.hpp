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
#include <cstddef>
#include <vector>

namespace qrep {

/// Two-qubit state diagonal in the Bell basis.
///
/// Population `i` belongs to the Bell state (I (x) P_i)|Phi+> with
/// P = {I, X, Y, Z}, i.e. the order is Phi+, Psi+, Psi-, Phi-. A state is
/// canonical when the populations are sorted in descending order; since any
/// permutation of the four Bell states is reachable with local Cliffords,
/// canonicalization is a free relabeling.
struct BellDiagonalState {
  std::array<double, 4> f{1.0, 0.0, 0.0, 0.0};

  [[nodiscard]] double fidelity() const { return f[0]; }
  [[nodiscard]] double sum() const { return f[0] + f[1] + f[2] + f[3]; }

  static BellDiagonalState perfect() { return {}; }
  static BellDiagonalState werner(double fidelity);
  static BellDiagonalState maximally_mixed() { return {{0.25, 0.25, 0.25, 0.25}}; }

  friend bool operator==(const BellDiagonalState&,
                         const BellDiagonalState&) = default;
};

/// Sorts the populations in descending order and renormalizes.
/// Throws InvalidState for populations below -1e-12 or a sum far from 1.
BellDiagonalState canonicalize(const BellDiagonalState& s);

/// Ratio of the two smaller error weights to the total error:
/// v = (f3 + f4) / (2 (f2 + f3 + f4)), with v = 0 for a perfect pair.
double shape_parameter(const BellDiagonalState& s);

namespace detail {

// Half-open bins with the last one closed; caller guarantees lo <= x <= hi.
// Starts where a uniform grid would put x (scale = bins / (hi - lo)) and
// walks to the largest edge not above it.
inline std::size_t locate(const std::vector<double>& e, double scale, double x) {
  const std::size_t bins = e.size() - 1;
  double guess = (x - e.front()) * scale;
  guess = guess < 0.0 ? 0.0 : guess;
  auto b = static_cast<std::size_t>(guess);
  if (b > bins - 1) b = bins - 1;
  while (b > 0 && e[b] > x) --b;
  while (b + 1 < bins && e[b + 1] <= x) ++b;
  return b;
}

}  // namespace detail

struct StateClass {
  std::size_t fidelityBin = 0;
  std::size_t shapeBin = 0;

  friend bool operator==(const StateClass&, const StateClass&) = default;
};

/// Discretization of the (fidelity, shape) plane used to key the planner
/// table. Bins are half-open [lo, hi) except the last one in each axis.
class ClassGrid {
 public:
  ClassGrid(std::vector<double> fidelityEdges, std::vector<double> shapeEdges);

  static ClassGrid uniform(std::size_t fidelityBins, std::size_t shapeBins);

  [[nodiscard]] std::size_t fidelity_bins() const { return fidelityEdges_.size() - 1; }
  [[nodiscard]] std::size_t shape_bins() const { return shapeEdges_.size() - 1; }
  [[nodiscard]] std::size_t size() const { return fidelity_bins() * shape_bins(); }
  [[nodiscard]] const std::vector<double>& fidelity_edges() const { return fidelityEdges_; }
  [[nodiscard]] const std::vector<double>& shape_edges() const { return shapeEdges_; }

  [[nodiscard]] std::size_t flat_index(StateClass c) const {
    return c.fidelityBin * shape_bins() + c.shapeBin;
  }
  [[nodiscard]] StateClass from_flat(std::size_t i) const {
    return {i / shape_bins(), i % shape_bins()};
  }

  /// Fidelity bin of `f`; throws Unclassifiable when f < 0.5.
  [[nodiscard]] std::size_t fidelity_bin(double f) const;
  [[nodiscard]] std::size_t shape_bin(double v) const;

  /// flat_index(classify(s)) for a canonical s with f1 >= 0.5, unchecked.
  [[nodiscard]] std::size_t flat_class_unchecked(const BellDiagonalState& s) const {
    const double f = s.f[0] < 1.0 ? s.f[0] : 1.0;
    const double err = s.f[1] + s.f[2] + s.f[3];
    double v = err <= 0.0 ? 0.0 : 0.5 * (s.f[2] + s.f[3]) / err;
    v = v < 0.0 ? 0.0 : (v > 0.5 ? 0.5 : v);
    return detail::locate(fidelityEdges_, fScale_, f) * shape_bins() +
           detail::locate(shapeEdges_, sScale_, v);
  }

 private:
  std::vector<double> fidelityEdges_;
  std::vector<double> shapeEdges_;
  double fScale_ = 0.0;
  double sScale_ = 0.0;
};

/// Result of one purification round: the kept pair (canonical) and the
/// probability that the parity check passed.
struct PumpOutcome {
  BellDiagonalState state;
  double successProb = 1.0;
};

/// Bins (f1, v) of a canonical state.
StateClass classify(const BellDiagonalState& s, const ClassGrid& g);

}  // namespace qrep
