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

#include "qrepeater/states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "qrepeater/errors.hpp"

namespace qrep {

BellDiagonalState BellDiagonalState::werner(double fidelity) {
  const double e = (1.0 - fidelity) / 3.0;
  return {{fidelity, e, e, e}};
}

BellDiagonalState canonicalize(const BellDiagonalState& s) {
  BellDiagonalState out = s;
  for (double& x : out.f) {
    if (!(x >= -1e-12)) {
      std::ostringstream os;
      os << "negative Bell population " << x;
      throw InvalidState(os.str());
    }
    x = std::max(x, 0.0);
  }
  const double total = out.sum();
  if (std::abs(total - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "Bell populations sum to " << total;
    throw InvalidState(os.str());
  }
  std::sort(out.f.begin(), out.f.end(), std::greater<>());
  // Leave already-normalized states untouched so the map is idempotent.
  if (std::abs(out.sum() - 1.0) > 4 * std::numeric_limits<double>::epsilon()) {
    const double norm = out.sum();
    for (double& x : out.f) x /= norm;
  }
  return out;
}

double shape_parameter(const BellDiagonalState& s) {
  const double err = s.f[1] + s.f[2] + s.f[3];
  if (err <= 0.0) return 0.0;
  return std::clamp(0.5 * (s.f[2] + s.f[3]) / err, 0.0, 0.5);
}

namespace {

void check_edges(const std::vector<double>& e, double lo, double hi,
                 const char* what) {
  if (e.size() < 2) throw ConfigError(std::string(what) + ": need at least two edges");
  if (e.front() != lo || e.back() != hi) {
    std::ostringstream os;
    os << what << ": edges must span [" << lo << ", " << hi << "]";
    throw ConfigError(os.str());
  }
  for (std::size_t i = 1; i < e.size(); ++i) {
    if (!(e[i] > e[i - 1])) {
      throw ConfigError(std::string(what) + ": edges must be strictly increasing");
    }
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t bins) {
  std::vector<double> e(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    e[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(bins);
  }
  e.back() = hi;
  return e;
}

}  // namespace

ClassGrid::ClassGrid(std::vector<double> fidelityEdges, std::vector<double> shapeEdges)
    : fidelityEdges_(std::move(fidelityEdges)), shapeEdges_(std::move(shapeEdges)) {
  check_edges(fidelityEdges_, 0.5, 1.0, "fidelity grid");
  check_edges(shapeEdges_, 0.0, 0.5, "shape grid");
  if (fidelity_bins() < 2) throw ConfigError("fidelity grid: need at least two bins");
  fScale_ = static_cast<double>(fidelity_bins()) / 0.5;
  sScale_ = static_cast<double>(shape_bins()) / 0.5;
}

ClassGrid ClassGrid::uniform(std::size_t fidelityBins, std::size_t shapeBins) {
  if (fidelityBins < 2 || shapeBins < 1) throw ConfigError("grid: too few bins");
  return ClassGrid(linspace(0.5, 1.0, fidelityBins), linspace(0.0, 0.5, shapeBins));
}

std::size_t ClassGrid::fidelity_bin(double f) const {
  if (!(f >= 0.5)) throw Unclassifiable("fidelity below 1/2");
  return detail::locate(fidelityEdges_, fScale_, std::min(f, 1.0));
}

std::size_t ClassGrid::shape_bin(double v) const {
  return detail::locate(shapeEdges_, sScale_, std::clamp(v, 0.0, 0.5));
}

StateClass classify(const BellDiagonalState& s, const ClassGrid& g) {
  return {g.fidelity_bin(s.fidelity()), g.shape_bin(shape_parameter(s))};
}

}  // namespace qrep
