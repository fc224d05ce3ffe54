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

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "qrepeater/noise.hpp"
#include "qrepeater/protocol.hpp"
#include "qrepeater/states.hpp"

namespace qrep {

struct PlannerOptions {
  Scheme scheme = Scheme::BDCZ;
  int mMax = 5;                   ///< pumping steps tried per chain
  int window = 0;                 ///< split half-width in units; 0 means ceil(log2 n) + 1
                                  ///< base segments for n segments
  bool allowNodeSkipping = true;  ///< leaves over several base segments
  bool allowMultiLevelPumping = true;
  double distanceUnit = 10.0;     ///< km per table step
  int skipCap = 4;                ///< longest leaf, in base segments
  int gatePairGridSize = 5;       ///< CTSL gate-pair choices
  double maxGenerationTime = std::numeric_limits<double>::infinity();
  int extraDistance = -1;         ///< query slack in units; -1 picks per scheme
  bool enforceOccupancy = true;

  /// Throws ConfigError on out-of-range values or a unit that does not
  /// divide the base spacing.
  void validate(const HardwareParams& hp) const;
};

/// How a table entry was built. Field meaning depends on `kind`:
///   Leaf:    a = span
///   Connect: a = left distance, b = left class, c = right class, d = gate option
///   Pump:    a = target class, b = source distance, c = source class,
///            d = gate option, e = source table (0 unpurified, 1 purified), m = steps
struct Origin {
  enum Kind : int { Leaf = 0, Connect = 1, Pump = 2 };
  int kind = Leaf;
  int a = 0, b = 0, c = 0, d = -1, e = 0, m = 0;
};

struct TableEntry {
  bool valid = false;
  BellDiagonalState state;
  double time = 0.0;
  double tau = 0.0;  ///< leaves only
  Occupancy occupancy;
  double nodes = 0.0;  ///< tree size counting shared subtrees every time
  Origin origin;
};

/// Strict total order used for per-class minima: time, then higher
/// fidelity, fewer nodes, and finally the origin fields.
bool better(const TableEntry& x, const TableEntry& y);

struct PlannerStats {
  std::uint64_t connectEvaluations = 0;
  std::uint64_t pumpEvaluations = 0;
  double seconds = 0.0;
};

struct Plan {
  Protocol protocol;
  BellDiagonalState state;
  double avgTime = 0.0;
  int distanceUnits = 0;
};

/// Dynamic-programming table over (distance, state class). Distances are in
/// units of opts.distanceUnit; each distance keeps an unpurified table
/// (leaves and connections) and a purified one (pumping chains, m >= 0).
class Planner {
 public:
  Planner(const HardwareParams& hp, ClassGrid grid, PlannerOptions opts);

  /// Fills every distance up to nMax units. Storage budgets are those of a
  /// chain nMax units long.
  void fill(int nMax);

  /// Individual fill steps; fill() runs them in order for n = 1..nMax.
  void seed_leaves();
  void sweep_connect(int n);
  void sweep_pump(int n);

  /// Fastest stored protocol with fidelity >= fidelity over at least
  /// `km`. Requires the table to cover the distance.
  [[nodiscard]] std::optional<Plan> query(double km, double fidelity) const;

  /// Highest fidelity stored at the distance a query for `km` would use.
  [[nodiscard]] double max_fidelity(double km) const;

  [[nodiscard]] const TableEntry& entry(int n, bool purified, std::size_t cls) const;
  [[nodiscard]] std::vector<std::size_t> classes(int n, bool purified) const;
  [[nodiscard]] NodePtr materialize(int n, bool purified, std::size_t cls) const;

  [[nodiscard]] int filled() const { return nMax_; }
  [[nodiscard]] int bridge_units() const { return bridge_; }
  [[nodiscard]] int window_for(int n) const;
  [[nodiscard]] int units_for(double km) const;
  [[nodiscard]] const Layout& layout() const { return layout_; }
  [[nodiscard]] const ClassGrid& grid() const { return grid_; }
  [[nodiscard]] const PlannerOptions& options() const { return opts_; }
  [[nodiscard]] const PlannerStats& stats() const { return stats_; }
  [[nodiscard]] int storage_limit() const { return budget_; }
  /// CTSL gate-pair choices as classes of the purified table at the bridge span.
  [[nodiscard]] const std::vector<std::size_t>& gate_options() const { return gateOptions_; }

 private:
  struct Level {
    std::vector<TableEntry> unpurified;
    std::vector<TableEntry> purified;
  };

  std::vector<TableEntry>& table(int n, bool purified);
  const std::vector<TableEntry>& table(int n, bool purified) const;
  void offer(std::vector<TableEntry>& dst, const TableEntry& cand) const;
  bool classify_into(const BellDiagonalState& s, std::size_t& cls) const;
  void choose_gate_options();
  NodePtr gate_node(int option, int offset) const;
  NodePtr build(int n, bool purified, std::size_t cls, int offset) const;

  HardwareParams hp_;
  ClassGrid grid_;
  PlannerOptions opts_;
  Layout layout_;
  int bridge_ = 1;
  int nMax_ = 0;
  int budget_ = 0;
  int extra_ = 0;
  std::vector<Level> levels_;  ///< index n, entry 0 unused
  std::vector<std::size_t> gateOptions_;
  PlannerStats stats_;
  mutable std::map<std::tuple<int, bool, std::size_t, int>, NodePtr> memo_;
};

/// One-shot optimization: fills a table just large enough for `km`.
/// Returns nullopt when no stored protocol reaches `fidelity`.
std::optional<Plan> optimize(double km, double fidelity, const HardwareParams& hp,
                             const ClassGrid& grid, const PlannerOptions& opts);

}  // namespace qrep
