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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qrepeater/baseline.hpp"
#include "qrepeater/errors.hpp"
#include "qrepeater/kernels.hpp"
#include "qrepeater/planner.hpp"
#include "qrepeater/simulate.hpp"

namespace py = pybind11;
using namespace qrep;

namespace {

using Populations = std::array<double, 4>;

BellDiagonalState as_state(const Populations& f) { return canonicalize(BellDiagonalState{f}); }

std::optional<BellDiagonalState> as_gate(const std::optional<Populations>& g) {
  if (!g) return std::nullopt;
  return as_state(*g);
}

py::dict plan_dict(const Protocol& p, const BellDiagonalState& s, double t) {
  py::dict d;
  d["fidelity"] = s.fidelity();
  d["populations"] = s.f;
  d["avg_time_s"] = t;
  d["protocol_json"] = to_json(p).dump();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Repeater protocol search, kernels and simulation";

  // Translators are tried newest first, so subclasses come after the base.
  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<ProtocolError>(m, "ProtocolError", base);
  py::register_exception<InvalidState>(m, "InvalidState", base);

  py::enum_<Scheme>(m, "Scheme").value("BDCZ", Scheme::BDCZ).value("CTSL", Scheme::CTSL);
  py::enum_<ErrorShape>(m, "ErrorShape")
      .value("WERNER", ErrorShape::Werner)
      .value("DEPHASED", ErrorShape::Dephased);

  py::class_<HardwareParams>(m, "HardwareParams")
      .def(py::init<>())
      .def_readwrite("signal_speed", &HardwareParams::signalSpeed)
      .def_readwrite("attenuation_length", &HardwareParams::attenuationLength)
      .def_readwrite("efficiency", &HardwareParams::efficiency)
      .def_readwrite("measurement_reliability", &HardwareParams::measurementReliability)
      .def_readwrite("gate_reliability", &HardwareParams::gateReliability)
      .def_readwrite("base_spacing", &HardwareParams::baseSpacing)
      .def_readwrite("error_shape", &HardwareParams::errorShape)
      .def("validate", &HardwareParams::validate);

  py::class_<PlannerOptions>(m, "PlannerOptions")
      .def(py::init<>())
      .def_readwrite("scheme", &PlannerOptions::scheme)
      .def_readwrite("m_max", &PlannerOptions::mMax)
      .def_readwrite("window", &PlannerOptions::window)
      .def_readwrite("allow_node_skipping", &PlannerOptions::allowNodeSkipping)
      .def_readwrite("allow_multilevel_pumping", &PlannerOptions::allowMultiLevelPumping)
      .def_readwrite("distance_unit", &PlannerOptions::distanceUnit)
      .def_readwrite("skip_cap", &PlannerOptions::skipCap);

  m.def("generation_fidelity", &generation_fidelity, py::arg("tau"), py::arg("span"),
        py::arg("hw"));
  m.def("min_generation_time", &min_generation_time, py::arg("span"), py::arg("hw"));

  m.def(
      "connect",
      [](const Populations& a, const Populations& b, const HardwareParams& hp,
         const std::optional<Populations>& gate) {
        return connect(as_state(a), as_state(b), hp, as_gate(gate)).f;
      },
      py::arg("a"), py::arg("b"), py::arg("hw"), py::arg("gate") = py::none());
  m.def(
      "pump",
      [](const Populations& t, const Populations& s, const HardwareParams& hp,
         const std::optional<Populations>& gate) {
        const auto o = pump(as_state(t), as_state(s), hp, as_gate(gate));
        return py::make_tuple(o.state.f, o.successProb);
      },
      py::arg("target"), py::arg("source"), py::arg("hw"), py::arg("gate") = py::none());

  py::class_<Planner>(m, "Planner")
      .def(py::init([](const HardwareParams& hp, const PlannerOptions& o, std::size_t fBins,
                       std::size_t sBins) {
             return Planner(hp, ClassGrid::uniform(fBins, sBins), o);
           }),
           py::arg("hw"), py::arg("options"), py::arg("fidelity_bins") = 100,
           py::arg("shape_bins") = 8)
      .def("fill", &Planner::fill, py::arg("n_max"), py::call_guard<py::gil_scoped_release>())
      .def("units_for", &Planner::units_for)
      .def("max_fidelity", &Planner::max_fidelity, py::arg("km"))
      .def(
          "query",
          [](const Planner& pl, double km, double f) -> py::object {
            const auto plan = pl.query(km, f);
            if (!plan) return py::none();
            return plan_dict(plan->protocol, plan->state, plan->avgTime);
          },
          py::arg("km"), py::arg("fidelity"))
      .def_property_readonly("bridge_units", &Planner::bridge_units)
      .def_property_readonly("evaluations", [](const Planner& pl) {
        return pl.stats().connectEvaluations + pl.stats().pumpEvaluations;
      });

  m.def(
      "baseline",
      [](Scheme s, double km, double f, const HardwareParams& hp) -> py::object {
        const auto b = unoptimized(s, km, f, hp);
        if (!b) return py::none();
        auto d = plan_dict(b->protocol, b->state, b->avgTime);
        d["pump_steps"] = b->pumpSteps;
        return d;
      },
      py::arg("scheme"), py::arg("km"), py::arg("fidelity"), py::arg("hw"));

  m.def(
      "simulate",
      [](const std::string& protocolJson, const HardwareParams& hp, std::uint64_t trials,
         std::uint64_t seed) {
        const auto p = protocol_from_json(nlohmann::json::parse(protocolJson), hp);
        TimeDistribution d;
        {
          py::gil_scoped_release release;
          d = run(p, hp, trials, seed);
        }
        py::dict out;
        out["mean"] = d.mean;
        out["stddev"] = d.stddev;
        out["median"] = d.median;
        out["fidelity"] = d.fidelity;
        out["samples"] = d.samples;
        return out;
      },
      py::arg("protocol_json"), py::arg("hw"), py::arg("trials"), py::arg("seed") = 1);
}
