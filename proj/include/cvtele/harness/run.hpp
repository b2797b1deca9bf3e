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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cvtele/harness/calibrate.hpp"
#include "cvtele/harness/config.hpp"
#include "cvtele/teleporter.hpp"
#include "cvtele/tomography.hpp"

namespace cvtele::harness {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr const char* kOutputDirEnv = "CVTELE_OUTPUT_DIR";

/// Sub-seed streams: every random draw derives from run.seed as
/// derive_seed(run.seed, stream).
enum class SeedStream : std::uint64_t {
  teleporter = 1,  // Monte Carlo shots (chunks derive further inside)
  input_trace = 2,
  output_trace = 3,
  input_record = 4,
  output_record = 5,
};

std::uint64_t sub_seed(const ExperimentConfig& config, SeedStream stream);

struct Provenance {
  std::string config_hash;  ///< FNV-1a 64 of emit_config, hex
  std::uint64_t seed = 0;
  std::string version;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

std::string config_hash(const ExperimentConfig& config);

struct PreparedExperiment {
  TeleporterParams params;
  std::optional<CalibrationResult> calibration;
};

/// Input state in front of Alice's detectors for the configured scenario.
GaussianState scenario_input(const ExperimentConfig& config);

/// Turns a config into validated teleporter parameters, running the loss
/// calibration if enabled. Throws ConfigError or PhysicsError.
PreparedExperiment prepare(const ExperimentConfig& config);

enum class WignerMethod { radon, analytic };

struct RunOptions {
  bool monte_carlo = false;
  bool traces = false;
  bool wigner = false;
  WignerMethod wigner_method = WignerMethod::radon;
};

/// Traces and Wigner grids are for what a detector reads: the input through
/// Alice's homodyne efficiency, the output through the verifying detector.
struct RunResult {
  Provenance provenance;
  std::optional<CalibrationResult> calibration;
  TeleportReport report;
  std::optional<McReport> monte_carlo;
  std::optional<PhaseScanTrace> input_trace;
  std::optional<PhaseScanTrace> output_trace;
  std::optional<WignerGrid> input_wigner;
  std::optional<WignerGrid> output_wigner;
};

RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

/// Explicit directory if non-empty, else $CVTELE_OUTPUT_DIR, else ".".
std::filesystem::path resolve_output_dir(const std::string& explicit_dir);

}  // namespace cvtele::harness
