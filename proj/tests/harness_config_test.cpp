// Copyright 2026 The cvtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cvtele/harness/config.hpp"
#include "cvtele/harness/run.hpp"

using namespace cvtele;
using namespace cvtele::harness;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "expected a ConfigError for:\n" << text;
  return ConfigError(0, "", "none");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ParseConfig, MinimalCoherentScenario) {
  const ExperimentConfig c = parse_config("[scenario]\ntype = coherent\n");
  EXPECT_EQ(c, ExperimentConfig{});
  const PreparedExperiment p = prepare(c);
  EXPECT_NEAR(p.params.input.mean()(0), 3.5, 1e-15);
  EXPECT_EQ(p.params.epr_sq_db, (std::array<double, 2>{-6.0, -6.0}));
}

TEST(ParseConfig, EmptyTextGivesDefaults) { EXPECT_EQ(parse_config(""), ExperimentConfig{}); }

TEST(ParseConfig, PositiveSqueezingRejectedWithLineAndKey) {
  const ConfigError e = parse_error("# sources\n[teleporter]\nepr_sq_db = +3\n");
  EXPECT_EQ(e.line(), 3u);
  EXPECT_EQ(e.key(), "teleporter.epr_sq_db");
  EXPECT_NE(std::string(e.what()).find("non-positive"), std::string::npos);
}

TEST(ParseConfig, PairSyntax) {
  const ExperimentConfig c = parse_config("[teleporter]\nepr_sq_db = -6, -5.5\neta_prop = 0.9\n");
  EXPECT_EQ(c.epr_sq_db, (std::array<double, 2>{-6.0, -5.5}));
  EXPECT_EQ(c.eta_prop, (std::array<double, 2>{0.9, 0.9}));
  EXPECT_EQ(parse_error("[teleporter]\nepr_sq_db = -6, -5, -4\n").line(), 2u);
}

TEST(ParseConfig, UnknownKeyRejected) {
  const ConfigError e = parse_error("[teleporter]\n\ng_x = 1\nbogus = 2\n");
  EXPECT_EQ(e.line(), 4u);
  EXPECT_EQ(e.key(), "teleporter.bogus");
}

TEST(ParseConfig, UnknownSectionRejected) {
  const ConfigError e = parse_error("[nonsense]\n");
  EXPECT_EQ(e.line(), 1u);
}

TEST(ParseConfig, TypeMismatches) {
  EXPECT_EQ(parse_error("[run]\nseed = abc\n").key(), "run.seed");
  EXPECT_EQ(parse_error("[run]\nshots = -5\n").key(), "run.shots");
  EXPECT_EQ(parse_error("[calibration]\nenabled = yes\n").key(), "calibration.enabled");
  EXPECT_EQ(parse_error("[scenario]\ntype = cat\n").key(), "scenario.type");
  EXPECT_EQ(parse_error("[teleporter]\ng_x = 1.0.0\n").key(), "teleporter.g_x");
  EXPECT_EQ(parse_error("[teleporter]\ng_x = inf\n").key(), "teleporter.g_x");
}

TEST(ParseConfig, StructuralErrors) {
  EXPECT_EQ(parse_error("g_x = 1\n").line(), 1u);
  EXPECT_EQ(parse_error("[teleporter\n").line(), 1u);
  EXPECT_EQ(parse_error("[teleporter]\ng_x\n").line(), 2u);
  EXPECT_EQ(parse_error("[teleporter]\ng_x = 1\ng_x = 2\n").line(), 3u);
}

TEST(ParseConfig, PhysicsViolationsDelegated) {
  EXPECT_EQ(parse_error("[teleporter]\nepr_antisq_db = 3\n").key(), "teleporter.epr_antisq_db");
  EXPECT_EQ(parse_error("[teleporter]\nvisibility = 1.2\n").key(), "teleporter.visibility");
  EXPECT_EQ(parse_error("[teleporter]\neta_source = 0\n").key(), "teleporter.eta_source");
  EXPECT_EQ(parse_error("[scenario]\ninput_antisq_db = 2\n").key(), "scenario.input_antisq_db");
  EXPECT_EQ(parse_error("[calibration]\ntarget_x_db = 1\n").key(), "calibration.target_x_db");
  EXPECT_EQ(parse_error("[tomography]\nx_min = 4\n").key(), "tomography.x_max");
}

TEST(ParseConfig, CommentsAndWhitespace) {
  const ExperimentConfig c =
      parse_config("; header\r\n  [run]  \r\n\t seed   =   7 \r\n# done\n");
  EXPECT_EQ(c.seed, 7u);
}

TEST(EmitConfig, RoundTripDefaultsAndPresets) {
  for (const ExperimentConfig& c :
       {ExperimentConfig{}, preset_config(Scenario::coherent), preset_config(Scenario::squeezed_x),
        preset_config(Scenario::squeezed_p), preset_config(Scenario::vacuum)}) {
    EXPECT_EQ(parse_config(emit_config(c)), c);
  }
}

TEST(EmitConfig, RoundTripAwkwardValues) {
  ExperimentConfig c;
  c.epr_sq_db = {-6.123456789012345, -0.1 - 0.2};
  c.epr_antisq_db = {6.2, 1.0 / 3.0};
  c.eta_prop = {0.1 + 0.2, 1.0 / 3.0};
  c.alpha = 5e-324;
  c.g_x = -1e300;
  c.seed = 18446744073709551615ULL;
  c.output_dir = "out dir/with#hash";
  c.scenario = Scenario::squeezed_p;
  c.trace_noise = true;
  EXPECT_EQ(parse_config(emit_config(c)), c);
  EXPECT_EQ(emit_config(parse_config(emit_config(c))), emit_config(c));
}

TEST(EmitConfig, EveryKeyIsEmittedOnce) {
  const std::string text = emit_config(ExperimentConfig{});
  for (const std::string& key : config_keys()) {
    const std::string leaf = "\n" + key.substr(key.find('.') + 1) + " =";
    EXPECT_NE(text.find(leaf), std::string::npos) << key;
  }
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(SetConfigValue, OverridesAndRejectsUnknown) {
  ExperimentConfig c;
  set_config_value(c, "teleporter.g_p", "0.5");
  EXPECT_EQ(c.g_p, 0.5);
  EXPECT_THROW(set_config_value(c, "teleporter.gp", "0.5"), ConfigError);
  EXPECT_THROW(set_config_value(c, "teleporter.g_p", "x"), ConfigError);
}

TEST(Presets, FilesMatchBuiltins) {
  const std::string dir = CVTELE_PRESET_DIR;
  EXPECT_EQ(parse_config(slurp(dir + "/coherent.ini")), preset_config(Scenario::coherent));
  EXPECT_EQ(parse_config(slurp(dir + "/squeezed.ini")), preset_config(Scenario::squeezed_x));
  EXPECT_EQ(parse_config(slurp(dir + "/vacuum.ini")), preset_config(Scenario::vacuum));
}

TEST(Presets, MatchPublishedSetup) {
  const ExperimentConfig c = preset_config(Scenario::squeezed_x);
  EXPECT_EQ(c.epr_sq_db, (std::array<double, 2>{-6.0, -6.0}));
  EXPECT_EQ(c.visibility, 0.98);
  EXPECT_TRUE(c.calibrate);
  EXPECT_EQ(c.target_x_db, -5.6);
  EXPECT_EQ(c.target_p_db, -5.5);
  EXPECT_EQ(c.input_sq_db, -6.2);
  EXPECT_EQ(c.input_antisq_db, 12.0);
  EXPECT_EQ(preset_config(Scenario::coherent).alpha, 3.5);
}
