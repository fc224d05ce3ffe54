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

#include <cstdio>
#include <fstream>

#include "qrepeater/config.hpp"
#include "qrepeater/errors.hpp"

using namespace qrep;

TEST_CASE("defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.hardware.gateReliability == 0.995);
  CHECK(c.grid.fidelityBins == 100u);
  CHECK(c.planner.mMax == 5);
  CHECK(c.trials == 10000u);
  CHECK(c.profile.fidelities.size() == 8u);
  CHECK(c.resolved_hardware().errorShape == ErrorShape::Werner);
}

TEST_CASE("error shape follows the scheme unless set") {
  RunConfig c = parse_config("[planner]\nscheme = ctsl\n");
  CHECK(c.resolved_hardware().errorShape == ErrorShape::Dephased);
  c = parse_config("[planner]\nscheme = ctsl\n[hardware]\nerror_shape = werner\n");
  CHECK(c.resolved_hardware().errorShape == ErrorShape::Werner);
}

TEST_CASE("every section parses") {
  const RunConfig c = parse_config(R"(
; comment
[hardware]
gate_reliability = 0.99
measurement_reliability = 0.99
attenuation_length_km = 22
[grid]
fidelity_bins = 60
shape_bins = 4
[planner]
scheme = bdcz
mmax = 3
window = 7
node_skipping = false
multilevel_pumping = no
distance_unit_km = 1
extra_distance_units = 0
[baseline]
pump_steps = 2
[simulate]
trials = 500
seed = 99
[profile]
l_min_km = 100
l_max_km = 300
l_step_km = 50
fidelities = 0.9, 0.95
[output]
csv = out.csv
)");
  CHECK(c.hardware.gateReliability == 0.99);
  CHECK(c.hardware.attenuationLength == 22.0);
  CHECK(c.grid.fidelityBins == 60u);
  CHECK(c.planner.mMax == 3);
  CHECK(c.planner.window == 7);
  CHECK_FALSE(c.planner.allowNodeSkipping);
  CHECK_FALSE(c.planner.allowMultiLevelPumping);
  CHECK(c.planner.distanceUnit == 1.0);
  CHECK(c.baseline.pumpSteps == 2);
  CHECK(c.trials == 500u);
  CHECK(c.seed == 99u);
  CHECK(c.profile.fidelities == std::vector<double>{0.9, 0.95});
  CHECK(c.output.csv == "out.csv");
}

TEST_CASE("bad input is rejected") {
  CHECK_THROWS_AS(parse_config("[hardware]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[planner]\nmmax = lots\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[planner]\nnode_skipping = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[planner]\nscheme = other\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[hardware]\ngate_reliability = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[simulate]\ntrials = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[profile]\nl_min_km = 500\nl_max_km = 100\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[planner]\ndistance_unit_km = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.ini"), ConfigError);
}

TEST_CASE("load from file") {
  const std::string path = "qrepeater_config_test.ini";
  {
    std::ofstream out(path);
    out << "[simulate]\nseed = 5\n";
  }
  CHECK(load_config(path).seed == 5u);
  std::remove(path.c_str());
}

TEST_CASE("error shape names") {
  CHECK(error_shape_from_string("dephased") == ErrorShape::Dephased);
  CHECK(to_string(ErrorShape::Werner) == "werner");
  CHECK_THROWS_AS(error_shape_from_string("pink"), ConfigError);
}
