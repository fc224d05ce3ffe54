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
#include <optional>
#include <string>
#include <vector>

#include "qrepeater/baseline.hpp"
#include "qrepeater/noise.hpp"
#include "qrepeater/planner.hpp"
#include "qrepeater/states.hpp"

namespace qrep {

struct GridSettings {
  std::size_t fidelityBins = 100;
  std::size_t shapeBins = 8;

  [[nodiscard]] ClassGrid make() const { return ClassGrid::uniform(fidelityBins, shapeBins); }
};

struct ProfileSettings {
  double lMinKm = 20.0;
  double lMaxKm = 1280.0;
  double lStepKm = 10.0;
  std::vector<double> fidelities{0.90, 0.91, 0.92, 0.93, 0.94, 0.95, 0.96, 0.97};
};

struct OutputSettings {
  std::string protocol;  ///< empty: standard output
  std::string summary;
  std::string csv;
  std::string samples;
};

/// Everything a run reads from its config file. Sections: [hardware],
/// [grid], [planner], [baseline], [simulate], [profile], [output].
struct RunConfig {
  HardwareParams hardware;
  std::optional<ErrorShape> errorShape;  ///< unset: Werner for BDCZ, dephased for CTSL
  GridSettings grid;
  PlannerOptions planner;
  BaselineOptions baseline;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  ProfileSettings profile;
  OutputSettings output;

  /// Hardware with the error shape resolved for the configured scheme.
  [[nodiscard]] HardwareParams resolved_hardware() const;
  /// Throws ConfigError on inconsistent values.
  void validate() const;
};

/// Parses INI-style text; unknown sections or keys are ConfigErrors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

ErrorShape error_shape_from_string(const std::string& s);
std::string to_string(ErrorShape s);

}  // namespace qrep
