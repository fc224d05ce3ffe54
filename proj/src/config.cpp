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

#include "qrepeater/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qrepeater/errors.hpp"

namespace qrep {

ErrorShape error_shape_from_string(const std::string& s) {
  if (s == "werner") return ErrorShape::Werner;
  if (s == "dephased") return ErrorShape::Dephased;
  throw ConfigError("unknown error shape '" + s + "' (expected werner or dephased)");
}

std::string to_string(ErrorShape s) { return s == ErrorShape::Werner ? "werner" : "dephased"; }

HardwareParams RunConfig::resolved_hardware() const {
  HardwareParams hp = hardware;
  hp.errorShape = errorShape ? *errorShape
                             : (planner.scheme == Scheme::CTSL ? ErrorShape::Dephased
                                                               : ErrorShape::Werner);
  return hp;
}

void RunConfig::validate() const {
  const HardwareParams hp = resolved_hardware();
  hp.validate();
  static_cast<void>(grid.make());
  planner.validate(hp);
  if (trials == 0) throw ConfigError("simulate.trials must be positive");
  if (baseline.maxPumpSteps < 0 || (baseline.pumpSteps && *baseline.pumpSteps < 0)) {
    throw ConfigError("baseline pump steps must be >= 0");
  }
  for (double f : {baseline.bdczLeafFidelity, baseline.ctslLeafFidelity}) {
    if (!(f >= 0.5 && f < 1.0)) throw ConfigError("baseline leaf fidelity must be in [0.5, 1)");
  }
  if (!(profile.lMinKm > 0 && profile.lMaxKm >= profile.lMinKm && profile.lStepKm > 0)) {
    throw ConfigError("profile distance range is empty or not positive");
  }
  if (profile.fidelities.empty()) throw ConfigError("profile.fidelities is empty");
}

namespace {

using boost::property_tree::ptree;

template <typename T>
T convert(const std::string& where, const std::string& text) {
  std::istringstream is(text);
  T value{};
  is >> value;
  if (is.fail() || !(is >> std::ws).eof()) {
    throw ConfigError(where + ": cannot parse '" + text + "'");
  }
  return value;
}

bool to_bool(const std::string& where, const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError(where + ": expected a boolean, got '" + text + "'");
}

std::vector<double> to_list(const std::string& where, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(convert<double>(where, item));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string& where, const std::string&)>;

template <typename T, typename Field>
Setter number(Field field) {
  return [field](RunConfig& c, const std::string& w, const std::string& v) {
    field(c) = convert<T>(w, v);
  };
}

const std::map<std::string, std::map<std::string, Setter>>& schema() {
  static const std::map<std::string, std::map<std::string, Setter>> s = {
      {"hardware",
       {
           {"signal_speed_km_s", number<double>([](RunConfig& c) -> double& { return c.hardware.signalSpeed; })},
           {"attenuation_length_km", number<double>([](RunConfig& c) -> double& { return c.hardware.attenuationLength; })},
           {"efficiency", number<double>([](RunConfig& c) -> double& { return c.hardware.efficiency; })},
           {"measurement_reliability", number<double>([](RunConfig& c) -> double& { return c.hardware.measurementReliability; })},
           {"gate_reliability", number<double>([](RunConfig& c) -> double& { return c.hardware.gateReliability; })},
           {"base_spacing_km", number<double>([](RunConfig& c) -> double& { return c.hardware.baseSpacing; })},
           {"error_shape", [](RunConfig& c, const std::string&, const std::string& v) {
              c.errorShape = error_shape_from_string(v);
            }},
       }},
      {"grid",
       {
           {"fidelity_bins", number<std::size_t>([](RunConfig& c) -> std::size_t& { return c.grid.fidelityBins; })},
           {"shape_bins", number<std::size_t>([](RunConfig& c) -> std::size_t& { return c.grid.shapeBins; })},
       }},
      {"planner",
       {
           {"scheme", [](RunConfig& c, const std::string&, const std::string& v) {
              c.planner.scheme = scheme_from_string(v);
            }},
           {"mmax", number<int>([](RunConfig& c) -> int& { return c.planner.mMax; })},
           {"window", number<int>([](RunConfig& c) -> int& { return c.planner.window; })},
           {"node_skipping", [](RunConfig& c, const std::string& w, const std::string& v) {
              c.planner.allowNodeSkipping = to_bool(w, v);
            }},
           {"multilevel_pumping", [](RunConfig& c, const std::string& w, const std::string& v) {
              c.planner.allowMultiLevelPumping = to_bool(w, v);
            }},
           {"distance_unit_km", number<double>([](RunConfig& c) -> double& { return c.planner.distanceUnit; })},
           {"skip_cap", number<int>([](RunConfig& c) -> int& { return c.planner.skipCap; })},
           {"gate_pair_options", number<int>([](RunConfig& c) -> int& { return c.planner.gatePairGridSize; })},
           {"max_generation_time_s", number<double>([](RunConfig& c) -> double& { return c.planner.maxGenerationTime; })},
           {"extra_distance_units", number<int>([](RunConfig& c) -> int& { return c.planner.extraDistance; })},
           {"enforce_occupancy", [](RunConfig& c, const std::string& w, const std::string& v) {
              c.planner.enforceOccupancy = to_bool(w, v);
            }},
       }},
      {"baseline",
       {
           {"pump_steps", [](RunConfig& c, const std::string& w, const std::string& v) {
              if (v == "auto") {
                c.baseline.pumpSteps.reset();
              } else {
                c.baseline.pumpSteps = convert<int>(w, v);
              }
            }},
           {"max_pump_steps", number<int>([](RunConfig& c) -> int& { return c.baseline.maxPumpSteps; })},
           {"bdcz_leaf_fidelity", number<double>([](RunConfig& c) -> double& { return c.baseline.bdczLeafFidelity; })},
           {"ctsl_leaf_fidelity", number<double>([](RunConfig& c) -> double& { return c.baseline.ctslLeafFidelity; })},
       }},
      {"simulate",
       {
           {"trials", number<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.trials; })},
           {"seed", number<std::uint64_t>([](RunConfig& c) -> std::uint64_t& { return c.seed; })},
       }},
      {"profile",
       {
           {"l_min_km", number<double>([](RunConfig& c) -> double& { return c.profile.lMinKm; })},
           {"l_max_km", number<double>([](RunConfig& c) -> double& { return c.profile.lMaxKm; })},
           {"l_step_km", number<double>([](RunConfig& c) -> double& { return c.profile.lStepKm; })},
           {"fidelities", [](RunConfig& c, const std::string& w, const std::string& v) {
              c.profile.fidelities = to_list(w, v);
            }},
       }},
      {"output",
       {
           {"protocol", [](RunConfig& c, const std::string&, const std::string& v) { c.output.protocol = v; }},
           {"summary", [](RunConfig& c, const std::string&, const std::string& v) { c.output.summary = v; }},
           {"csv", [](RunConfig& c, const std::string&, const std::string& v) { c.output.csv = v; }},
           {"samples", [](RunConfig& c, const std::string&, const std::string& v) { c.output.samples = v; }},
       }},
  };
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  ptree tree;
  std::istringstream is(text);
  try {
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  RunConfig cfg;
  const auto& sch = schema();
  for (const auto& [section, body] : tree) {
    auto sit = sch.find(section);
    if (sit == sch.end()) {
      if (body.empty() && !body.data().empty()) {
        throw ConfigError("key '" + section + "' must be inside a section");
      }
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, node] : body) {
      const std::string where = section + "." + key;
      auto kit = sit->second.find(key);
      if (kit == sit->second.end()) throw ConfigError("unknown config key " + where);
      kit->second(cfg, where, node.data());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qrep
