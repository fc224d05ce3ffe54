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

#include "qrepeater/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qrepeater/errors.hpp"
#include "qrepeater/kernels.hpp"

namespace qrep {

std::string to_string(Scheme s) { return s == Scheme::BDCZ ? "bdcz" : "ctsl"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "bdcz" || s == "BDCZ") return Scheme::BDCZ;
  if (s == "ctsl" || s == "CTSL") return Scheme::CTSL;
  throw ConfigError("unknown scheme '" + s + "' (expected bdcz or ctsl)");
}

double connect_time(double t1, double t2, double tGate, double spanKm,
                    const HardwareParams& hp) {
  return std::max({t1, t2, tGate}) + spanKm / hp.signalSpeed;
}

double pump_time(double tTarget, double tSource, double tGate, double spanKm, double prob,
                 const HardwareParams& hp) {
  return (tTarget + std::max(tSource, tGate) + spanKm / hp.signalSpeed) / prob;
}

namespace {

std::optional<BellDiagonalState> gate_state(const NodePtr& gate) {
  if (!gate) return std::nullopt;
  return gate->state;
}

double gate_time(const NodePtr& gate) { return gate ? gate->avgTime : 0.0; }

}  // namespace

NodePtr make_generate(const Span& span, double tau, const HardwareParams& hp,
                      const Layout& layout) {
  ProtocolNode n;
  n.kind = NodeKind::Generate;
  n.span = span;
  n.tau = tau;
  n.state = generation_state(tau, layout.km(span), hp);
  n.avgTime = tau;
  return std::make_shared<const ProtocolNode>(std::move(n));
}

NodePtr make_connect(NodePtr left, NodePtr right, NodePtr gate, const HardwareParams& hp,
                     const Layout& layout) {
  ProtocolNode n;
  n.kind = NodeKind::Connect;
  n.span = {left->span.start, right->span.end};
  n.state = connect(left->state, right->state, hp, gate_state(gate));
  n.avgTime = connect_time(left->avgTime, right->avgTime, gate_time(gate), layout.km(n.span), hp);
  n.first = std::move(left);
  n.second = std::move(right);
  n.gate = std::move(gate);
  return std::make_shared<const ProtocolNode>(std::move(n));
}

NodePtr make_pump(NodePtr target, NodePtr source, NodePtr gate, const HardwareParams& hp,
                  const Layout& layout) {
  ProtocolNode n;
  n.kind = NodeKind::Pump;
  n.span = target->span;
  const PumpOutcome out = pump(target->state, source->state, hp, gate_state(gate));
  n.state = out.state;
  n.successProb = out.successProb;
  n.avgTime = pump_time(target->avgTime, source->avgTime, gate_time(gate), layout.km(n.span),
                        out.successProb, hp);
  n.first = std::move(target);
  n.second = std::move(source);
  n.gate = std::move(gate);
  return std::make_shared<const ProtocolNode>(std::move(n));
}

namespace {

std::string span_text(const Span& s) {
  std::ostringstream os;
  os << "[" << s.start << ", " << s.end << "]";
  return os.str();
}

void fail(const std::string& path, const std::string& what) {
  throw ProtocolError(path + ": " + what);
}

void validate_node(const NodePtr& node, const std::string& path, const Layout& layout,
                   const HardwareParams& hp, std::unordered_set<const ProtocolNode*>& seen) {
  if (!node) fail(path, "missing node");
  if (!seen.insert(node.get()).second) return;
  const ProtocolNode& n = *node;
  if (n.span.length() < 1) fail(path, "span " + span_text(n.span) + " is empty");
  const bool ctsl = layout.scheme == Scheme::CTSL;
  const int b = layout.bridgeUnits;
  switch (n.kind) {
    case NodeKind::Generate: {
      if (n.first || n.second || n.gate) fail(path, "generate node has children");
      const double tmin = min_generation_time(layout.km(n.span), hp);
      if (!(n.tau >= tmin)) fail(path, "generation time below the attenuation limit");
      return;
    }
    case NodeKind::Connect: {
      if (!n.first || !n.second) fail(path, "connect node needs two children");
      const Span l = n.first->span;
      const Span r = n.second->span;
      if (n.span.start != l.start || n.span.end != r.end) {
        fail(path, "span " + span_text(n.span) + " is not the union of its children");
      }
      if (ctsl) {
        if (r.start != l.end + b) fail(path, "CTSL connection must bridge exactly one segment");
        if (!n.gate) fail(path, "CTSL connection needs a gate pair");
        if (n.gate->span.length() != b) {
          fail(path, "gate pair must span exactly the bridge segment");
        }
      } else {
        if (r.start != l.end) fail(path, "BDCZ connection children must abut");
        if (n.gate) fail(path, "BDCZ connection has no gate pair");
      }
      validate_node(n.first, path + ".first", layout, hp, seen);
      validate_node(n.second, path + ".second", layout, hp, seen);
      if (n.gate) validate_node(n.gate, path + ".gate", layout, hp, seen);
      return;
    }
    case NodeKind::Pump: {
      if (!n.first || !n.second) fail(path, "pump node needs target and source");
      if (n.first->span != n.span) fail(path, "pump target span differs from node span");
      const Span s = n.second->span;
      if (ctsl && n.span.length() == b) {
        // Elementary pairs are pumped locally, the source held in the
        // communication qubits.
        if (s != n.span) fail(path, "pumping an elementary pair needs a same-span source");
        if (n.gate) fail(path, "local pumping has no gate pair");
      } else if (ctsl) {
        if (s.start != n.span.start + b || s.end != n.span.end - b) {
          fail(path, "CTSL pumping source must span " +
                         span_text({n.span.start + b, n.span.end - b}));
        }
        if (!n.gate) fail(path, "CTSL pumping needs a gate pair");
        if (n.gate->span.length() != b) {
          fail(path, "gate pair must span exactly one bridge segment");
        }
      } else {
        if (s != n.span) fail(path, "BDCZ pumping source must share the target span");
        if (n.gate) fail(path, "BDCZ pumping has no gate pair");
      }
      validate_node(n.first, path + ".first", layout, hp, seen);
      validate_node(n.second, path + ".second", layout, hp, seen);
      if (n.gate) validate_node(n.gate, path + ".gate", layout, hp, seen);
      return;
    }
  }
}

// Memoized recomputation over the DAG.
class Evaluator {
 public:
  Evaluator(const HardwareParams& hp, const Layout& layout) : hp_(hp), layout_(layout) {}

  const ProtocolNode& eval(const NodePtr& node) {
    auto it = memo_.find(node.get());
    if (it != memo_.end()) return *it->second;
    NodePtr fresh;
    switch (node->kind) {
      case NodeKind::Generate:
        fresh = make_generate(node->span, node->tau, hp_, layout_);
        break;
      case NodeKind::Connect:
        fresh = make_connect(rebuilt(node->first), rebuilt(node->second), rebuilt(node->gate),
                             hp_, layout_);
        break;
      case NodeKind::Pump:
        fresh = make_pump(rebuilt(node->first), rebuilt(node->second), rebuilt(node->gate), hp_,
                          layout_);
        break;
    }
    const ProtocolNode& ref = *fresh;
    memo_.emplace(node.get(), std::move(fresh));
    return ref;
  }

 private:
  NodePtr rebuilt(const NodePtr& node) {
    if (!node) return nullptr;
    eval(node);
    return memo_.at(node.get());
  }

  const HardwareParams& hp_;
  const Layout& layout_;
  std::unordered_map<const ProtocolNode*, NodePtr> memo_;
};

double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

void validate_structure(const Protocol& p, const HardwareParams& hp) {
  std::unordered_set<const ProtocolNode*> seen;
  validate_node(p.root, "root", p.layout, hp, seen);
}

Evaluation evaluate(const Protocol& p, const HardwareParams& hp) {
  Evaluator ev(hp, p.layout);
  const ProtocolNode& n = ev.eval(p.root);
  return {n.state, n.avgTime};
}

double cache_discrepancy(const Protocol& p, const HardwareParams& hp) {
  Evaluator ev(hp, p.layout);
  double worst = 0.0;
  std::unordered_set<const ProtocolNode*> seen;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& node) {
    if (!node || !seen.insert(node.get()).second) return;
    walk(node->first);
    walk(node->second);
    walk(node->gate);
    const ProtocolNode& fresh = ev.eval(node);
    worst = std::max(worst, rel_diff(fresh.avgTime, node->avgTime));
    worst = std::max(worst, rel_diff(fresh.successProb, node->successProb));
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(fresh.state.f[k] - node->state.f[k]));
  };
  walk(p.root);
  return worst;
}

int Occupancy::peak() const { return std::max({start, end, interior}); }

Occupancy occupancy_leaf() { return {1, 1, 0}; }

Occupancy occupancy_connect(const Occupancy& l, const Occupancy& r, bool abutting) {
  Occupancy o;
  o.start = l.start;
  o.end = r.end;
  o.interior = std::max(l.interior, r.interior);
  if (abutting) {
    o.interior = std::max(o.interior, l.end + r.start);
  } else {
    o.interior = std::max({o.interior, l.end, r.start});
  }
  return o;
}

Occupancy occupancy_pump(const Occupancy& t, const Occupancy& s, bool sameSpan) {
  if (sameSpan) {
    return {std::max(t.start, 1 + s.start), std::max(t.end, 1 + s.end),
            std::max(t.interior, s.interior)};
  }
  return {t.start, t.end, std::max(t.interior, s.peak())};
}

namespace {

// Per-node peak usage over the root span; exact for any tree shape.
class UsageProfile {
 public:
  explicit UsageProfile(const Layout& layout) : layout_(layout) {}

  const std::vector<int>& of(const NodePtr& node) {
    auto it = memo_.find(node.get());
    if (it != memo_.end()) return it->second;
    const int len = node->span.length();
    std::vector<int> usage(static_cast<std::size_t>(len + 1), 0);
    auto add = [&](const NodePtr& child, std::vector<int>& dst) {
      const auto& u = of(child);
      const int off = child->span.start - node->span.start;
      for (std::size_t i = 0; i < u.size(); ++i) {
        const int at = off + static_cast<int>(i);
        if (at >= 0 && at <= len) dst[static_cast<std::size_t>(at)] += u[i];
      }
    };
    switch (node->kind) {
      case NodeKind::Generate:
        usage.front() = 1;
        usage.back() = 1;
        break;
      case NodeKind::Connect:
        add(node->first, usage);
        add(node->second, usage);
        usage.front() = std::max(usage.front(), 1);
        usage.back() = std::max(usage.back(), 1);
        break;
      case NodeKind::Pump: {
        std::vector<int> during(usage.size(), 0);
        during.front() = 1;
        during.back() = 1;
        // CTSL elementary pumping keeps the source in the communication qubits.
        const bool local = layout_.scheme == Scheme::CTSL &&
                           node->span.length() == layout_.bridgeUnits;
        if (!local) add(node->second, during);
        add(node->first, usage);
        for (std::size_t i = 0; i < usage.size(); ++i) usage[i] = std::max(usage[i], during[i]);
        break;
      }
    }
    return memo_.emplace(node.get(), std::move(usage)).first->second;
  }

 private:
  const Layout& layout_;
  std::unordered_map<const ProtocolNode*, std::vector<int>> memo_;
};

}  // namespace

Occupancy occupancy_of(const Protocol& p) {
  UsageProfile prof(p.layout);
  const auto& u = prof.of(p.root);
  Occupancy o{u.front(), u.back(), 0};
  for (std::size_t i = 1; i + 1 < u.size(); ++i) o.interior = std::max(o.interior, u[i]);
  return o;
}

int storage_budget(Scheme scheme, double totalKm, const HardwareParams& hp) {
  if (scheme == Scheme::CTSL) return 1;
  const double segments = std::max(1.0, std::ceil(totalKm / hp.baseSpacing - 1e-9));
  return 2 * static_cast<int>(std::ceil(std::log2(2.0 * segments) - 1e-12));
}

bool occupancy_check(const Protocol& p, const HardwareParams& hp) {
  return occupancy_of(p).peak() <= storage_budget(p.layout.scheme, p.layout.km(p.root->span), hp);
}

std::uint64_t count_distinct_nodes(const Protocol& p) {
  std::unordered_set<const ProtocolNode*> seen;
  std::function<void(const NodePtr&)> walk = [&](const NodePtr& n) {
    if (!n || !seen.insert(n.get()).second) return;
    walk(n->first);
    walk(n->second);
    walk(n->gate);
  };
  walk(p.root);
  return seen.size();
}

namespace {

const char* kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Generate: return "generate";
    case NodeKind::Connect: return "connect";
    case NodeKind::Pump: return "pump";
  }
  return "?";
}

}  // namespace

nlohmann::ordered_json to_json(const Protocol& p) {
  using nlohmann::ordered_json;
  std::unordered_map<const ProtocolNode*, int> ids;
  ordered_json nodes = ordered_json::array();
  std::function<int(const NodePtr&)> emit = [&](const NodePtr& n) -> int {
    auto it = ids.find(n.get());
    if (it != ids.end()) return it->second;
    int a = -1, b = -1, g = -1;
    if (n->first) a = emit(n->first);
    if (n->second) b = emit(n->second);
    if (n->gate) g = emit(n->gate);
    const int id = static_cast<int>(nodes.size());
    ordered_json j;
    j["id"] = id;
    j["kind"] = kind_name(n->kind);
    j["span"] = {n->span.start, n->span.end};
    if (n->kind == NodeKind::Generate) j["tau_e_s"] = n->tau;
    if (a >= 0) j["children"] = {a, b};
    if (g >= 0) j["gate"] = g;
    j["state"] = {n->state.f[0], n->state.f[1], n->state.f[2], n->state.f[3]};
    j["avg_time_s"] = n->avgTime;
    if (n->kind == NodeKind::Pump) j["success_prob"] = n->successProb;
    nodes.push_back(std::move(j));
    ids.emplace(n.get(), id);
    return id;
  };
  const int root = emit(p.root);
  ordered_json out;
  out["format"] = "qrepeater-protocol";
  out["version"] = 1;
  out["scheme"] = to_string(p.layout.scheme);
  out["unit_km"] = p.layout.unitKm;
  out["bridge_units"] = p.layout.bridgeUnits;
  out["root"] = root;
  out["fidelity"] = p.root->state.fidelity();
  out["avg_time_s"] = p.root->avgTime;
  out["nodes"] = std::move(nodes);
  return out;
}

Protocol protocol_from_json(const nlohmann::json& j, const HardwareParams& hp) {
  auto where = [](const std::string& loc, const std::string& what) {
    return ProtocolError("protocol " + loc + ": " + what);
  };
  Protocol p;
  try {
    if (j.at("format").get<std::string>() != "qrepeater-protocol") {
      throw where("format", "not a qrepeater protocol file");
    }
    if (j.at("version").get<int>() != 1) throw where("version", "unsupported version");
    p.layout.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    p.layout.unitKm = j.at("unit_km").get<double>();
    p.layout.bridgeUnits = j.at("bridge_units").get<int>();
    if (!(p.layout.unitKm > 0) || p.layout.bridgeUnits < 1) {
      throw where("unit_km", "distance unit and bridge must be positive");
    }
  } catch (const nlohmann::json::exception& e) {
    throw where("header", e.what());
  } catch (const ConfigError& e) {
    throw where("scheme", e.what());
  }

  const auto& arr = j.at("nodes");
  if (!arr.is_array() || arr.empty()) throw where("nodes", "expected a non-empty array");
  std::vector<NodePtr> built;
  built.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string loc = "nodes[" + std::to_string(i) + "]";
    const auto& nj = arr[i];
    try {
      if (nj.at("id").get<std::size_t>() != i) throw where(loc, "ids must be sequential");
      const auto kind = nj.at("kind").get<std::string>();
      const auto span = nj.at("span").get<std::vector<int>>();
      if (span.size() != 2) throw where(loc + ".span", "expected [start, end]");
      auto ref = [&](const nlohmann::json& v, const char* field) -> NodePtr {
        const auto id = v.get<std::size_t>();
        if (id >= i) throw where(loc + "." + field, "must reference an earlier node");
        return built[id];
      };
      NodePtr gate = nj.contains("gate") ? ref(nj.at("gate"), "gate") : nullptr;
      NodePtr node;
      if (kind == "generate") {
        const double tau = nj.at("tau_e_s").get<double>();
        const Span s{span[0], span[1]};
        if (s.length() < 1) throw where(loc + ".span", "empty span");
        if (!(tau >= min_generation_time(p.layout.km(s), hp))) {
          throw where(loc + ".tau_e_s", "below the attenuation limit for this span");
        }
        node = make_generate(s, tau, hp, p.layout);
      } else if (kind == "connect" || kind == "pump") {
        const auto& ch = nj.at("children");
        if (!ch.is_array() || ch.size() != 2) throw where(loc + ".children", "expected two ids");
        NodePtr a = ref(ch[0], "children");
        NodePtr b = ref(ch[1], "children");
        node = kind == "connect" ? make_connect(a, b, gate, hp, p.layout)
                                 : make_pump(a, b, gate, hp, p.layout);
      } else {
        throw where(loc + ".kind", "unknown kind '" + kind + "'");
      }
      if (node->span != Span{span[0], span[1]}) {
        throw where(loc + ".span", "does not match the children");
      }
      const auto cached = nj.at("state").get<std::vector<double>>();
      if (cached.size() != 4) throw where(loc + ".state", "expected four populations");
      for (int k = 0; k < 4; ++k) {
        if (std::abs(cached[k] - node->state.f[k]) > 1e-9) {
          throw where(loc + ".state", "does not match recomputation under this hardware");
        }
      }
      if (rel_diff(nj.at("avg_time_s").get<double>(), node->avgTime) > 1e-9) {
        throw where(loc + ".avg_time_s", "does not match recomputation under this hardware");
      }
      built.push_back(std::move(node));
    } catch (const nlohmann::json::exception& e) {
      throw where(loc, e.what());
    }
  }
  std::size_t root = 0;
  try {
    root = j.at("root").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw where("root", e.what());
  }
  if (root >= built.size()) throw where("root", "references a missing node");
  p.root = built[root];
  validate_structure(p, hp);
  return p;
}

}  // namespace qrep
