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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cvtele::harness {

enum class Scenario { coherent, squeezed_x, squeezed_p, vacuum };

std::string_view to_string(Scenario scenario);

/// Rejected configuration text. line is 0 when the error is not tied to a
/// line (e.g. a command-line override).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::string key, const std::string& message);

  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }
  /// Message without the line/key prefix.
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::string key_;
  std::string message_;
};

/// Flat keyword configuration of one experiment. Every field maps to one
/// "section.key" entry of the text format; see config_keys().
struct ExperimentConfig {
  // [scenario]
  Scenario scenario = Scenario::coherent;
  double alpha = 3.5;
  double input_sq_db = -6.2;
  double input_antisq_db = 12.0;
  /// Input levels are what Alice's detectors read; the state in front of
  /// them is inferred by undoing a loss of visibility^2.
  bool input_detector_referenced = true;

  // [teleporter]
  // Pair keys accept "v" (both) or "v1, v2" (source/path 1 and 2).
  std::array<double, 2> epr_sq_db{-6.0, -6.0};
  std::array<double, 2> epr_antisq_db{6.0, 6.0};
  std::array<double, 2> eta_source{1.0, 1.0};
  std::array<double, 2> eta_prop{1.0, 1.0};
  /// Homodyne fringe visibility; detector efficiency is its square.
  double visibility = 1.0;
  double eta_verify = 1.0;
  double g_x = 1.0;
  double g_p = 1.0;

  // [calibration]
  /// Replace eta_source by a fit to the target EPR correlations.
  bool calibrate = false;
  double target_x_db = -5.6;
  double target_p_db = -5.5;

  // [trace]
  std::size_t trace_points = 361;
  std::size_t trace_averages = 30;
  bool trace_noise = false;

  // [tomography]
  std::size_t samples = 100000;
  std::size_t phase_bins = 120;
  double cutoff = 0.75;
  double bin_fraction = 0.2;
  double field_of_view = 5.0;
  bool auto_grid = true;
  std::size_t n_x = 81;
  std::size_t n_p = 81;
  double x_min = -3.0;
  double x_max = 3.0;
  double p_min = -3.0;
  double p_max = 3.0;

  // [run]
  std::uint64_t seed = 20080101;
  std::size_t shots = 100000;
  std::string output_dir;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// All accepted "section.key" names, in emission order.
std::vector<std::string> config_keys();

/// Parses the documented grammar:
///   # comment          (also ';')
///   [section]
///   key = value
/// Unknown sections or keys, duplicates, malformed values and physically
/// invalid settings raise ConfigError carrying the line and key.
ExperimentConfig parse_config(std::string_view text);

/// Applies "section.key" = value on top of an existing config.
void set_config_value(ExperimentConfig& config, std::string_view dotted_key,
                      std::string_view value, std::size_t line = 0);

/// Physics and range checks shared by parsing and overrides.
void validate_config(const ExperimentConfig& config);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const ExperimentConfig& config);

/// Built-in experiment presets matching the published setups.
ExperimentConfig preset_config(Scenario scenario);

}  // namespace cvtele::harness
