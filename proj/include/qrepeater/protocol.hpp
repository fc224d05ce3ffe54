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
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qrepeater/noise.hpp"
#include "qrepeater/states.hpp"

namespace qrep {

enum class Scheme { BDCZ, CTSL };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

/// Closed node interval [start, end] measured in distance units.
struct Span {
  int start = 0;
  int end = 0;

  [[nodiscard]] int length() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class NodeKind { Generate, Connect, Pump };

struct ProtocolNode;
using NodePtr = std::shared_ptr<const ProtocolNode>;

/// One step of a repeater protocol. Subtrees may be shared (a pumping chain
/// reuses the same source recipe at every step), so a protocol is a DAG.
///
///  - Generate: elementary pair over `span` with generation time `tau`.
///  - Connect: `first` and `second` joined at the middle. BDCZ children abut;
///    CTSL children are separated by one bridge segment spanned by `gate`.
///  - Pump: `first` is the kept pair, `second` the sacrificed source. BDCZ
///    sources share the target span; CTSL sources sit one bridge segment
///    inside each end and both remote CNOTs use `gate`.
struct ProtocolNode {
  NodeKind kind = NodeKind::Generate;
  Span span;
  double tau = 0.0;
  NodePtr first;
  NodePtr second;
  NodePtr gate;

  BellDiagonalState state;
  double avgTime = 0.0;
  double successProb = 1.0;  ///< pump steps only
};

/// Fixed context a protocol is interpreted in.
struct Layout {
  Scheme scheme = Scheme::BDCZ;
  double unitKm = 10.0;
  int bridgeUnits = 1;  ///< CTSL gap between connected pairs, in units

  [[nodiscard]] double km(const Span& s) const { return s.length() * unitKm; }
};

struct Protocol {
  Layout layout;
  NodePtr root;
};

/// Node constructors; they evaluate the cached state and time with the
/// kernels and the average-time recursions:
///   Generate: T = tau
///   Connect:  T = max(T_1, T_2, T_gate) + span / c
///   Pump:     T = (T_target + max(T_source, T_gate) + span / c) / P
NodePtr make_generate(const Span& span, double tau, const HardwareParams& hp,
                      const Layout& layout);
NodePtr make_connect(NodePtr left, NodePtr right, NodePtr gate, const HardwareParams& hp,
                     const Layout& layout);
NodePtr make_pump(NodePtr target, NodePtr source, NodePtr gate, const HardwareParams& hp,
                  const Layout& layout);

/// Time recursions shared by the planner, baseline and evaluator.
double connect_time(double t1, double t2, double tGate, double spanKm,
                    const HardwareParams& hp);
double pump_time(double tTarget, double tSource, double tGate, double spanKm, double prob,
                 const HardwareParams& hp);

/// Checks span and gate-pair structure against the layout's scheme and that
/// every leaf time is feasible. Throws ProtocolError with a node path.
void validate_structure(const Protocol& p, const HardwareParams& hp);

struct Evaluation {
  BellDiagonalState state;
  double avgTime = 0.0;
};

/// Recomputes the root state and average time from the leaves.
Evaluation evaluate(const Protocol& p, const HardwareParams& hp);

/// Largest relative difference between cached and recomputed values over
/// every node.
double cache_discrepancy(const Protocol& p, const HardwareParams& hp);

/// Peak simultaneous storage-qubit usage of a subtree at its two end nodes
/// and anywhere strictly inside.
struct Occupancy {
  int start = 1;
  int end = 1;
  int interior = 0;

  [[nodiscard]] int peak() const;
};

Occupancy occupancy_leaf();
Occupancy occupancy_connect(const Occupancy& left, const Occupancy& right, bool abutting);
Occupancy occupancy_pump(const Occupancy& target, const Occupancy& source, bool sameSpan);

Occupancy occupancy_of(const Protocol& p);

/// Storage qubits available per node: 2 ceil(log2(2N)) for BDCZ over N
/// segments of length L0, one for CTSL.
int storage_budget(Scheme scheme, double totalKm, const HardwareParams& hp);

/// True when no node ever needs more storage qubits than its budget.
bool occupancy_check(const Protocol& p, const HardwareParams& hp);

std::uint64_t count_distinct_nodes(const Protocol& p);

/// JSON form: shared nodes are listed once in post-order and referenced by
/// id. See docs/protocol_format.md.
nlohmann::ordered_json to_json(const Protocol& p);

/// Parses and validates a protocol file against the hardware: structure,
/// cached states and times must match recomputation.
Protocol protocol_from_json(const nlohmann::json& j, const HardwareParams& hp);

}  // namespace qrep
