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

#include "cvtele/harness/run.hpp"

#include <cstdio>
#include <cstdlib>

#include "cvtele/errors.hpp"
#include "cvtele/rng.hpp"

namespace cvtele::harness {

std::uint64_t sub_seed(const ExperimentConfig& config, SeedStream stream) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(stream));
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : emit_config(config)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GaussianState scenario_input(const ExperimentConfig& c) {
  switch (c.scenario) {
    case Scenario::coherent:
      return coherent(c.alpha, 0.0);
    case Scenario::vacuum:
      return vacuum(1);
    case Scenario::squeezed_x:
    case Scenario::squeezed_p: {
      const double sq = DbValue{c.input_sq_db}.variance();
      const double anti = DbValue{c.input_antisq_db}.variance();
      Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
      // Exact axis swap rather than a numerical quarter-turn.
      cov(0, 0) = c.scenario == Scenario::squeezed_x ? sq : anti;
      cov(1, 1) = c.scenario == Scenario::squeezed_x ? anti : sq;
      GaussianState measured(Eigen::Vector2d::Zero(), cov);
      if (!c.input_detector_referenced) return measured;
      return undo_detection_loss(measured, efficiency_from_visibility(c.visibility));
    }
  }
  throw ConfigError(0, "scenario.type", "unhandled scenario");
}

PreparedExperiment prepare(const ExperimentConfig& c) {
  validate_config(c);
  PreparedExperiment out;
  TeleporterParams& p = out.params;
  p.epr_sq_db = c.epr_sq_db;
  p.epr_antisq_db = c.epr_antisq_db;
  p.eta_source = c.eta_source;
  p.eta_prop = c.eta_prop;
  p.eta_hom = efficiency_from_visibility(c.visibility);
  p.eta_verify = c.eta_verify;
  p.g_x = c.g_x;
  p.g_p = c.g_p;
  p.seed = sub_seed(c, SeedStream::teleporter);
  p.input = scenario_input(c);
  if (c.calibrate) {
    CalibrationTarget target;
    target.epr_x_db = c.target_x_db;
    target.epr_p_db = c.target_p_db;
    target.base = p;
    if (c.scenario == Scenario::squeezed_x || c.scenario == Scenario::squeezed_p)
      target.input_db = std::array<double, 2>{c.input_sq_db, c.input_antisq_db};
    out.calibration = calibrate_losses(target);
    p.eta_source = out.calibration->eta_source;
  }
  p.validate();
  return out;
}

namespace {

WignerGrid reconstruct(const ExperimentConfig& c, const GaussianState& state, WignerMethod method,
                       SeedStream stream) {
  GridSpec fixed{c.x_min, c.x_max, c.n_x, c.p_min, c.p_max, c.n_p};
  if (method == WignerMethod::analytic) {
    return wigner_analytic(state, c.auto_grid ? grid_for_state(state, c.n_x, c.n_p) : fixed);
  }
  Rng rng(sub_seed(c, stream));
  const QuadratureRecord record = sample_record(state, c.samples, PhaseSchedule{}, rng);
  RadonOptions options;
  options.filter_cutoff = c.cutoff;
  options.phase_bins = c.phase_bins;
  options.bin_fraction = c.bin_fraction;
  options.field_of_view = c.field_of_view;
  return inverse_radon(record, c.auto_grid ? grid_for_record(record, c.n_x, c.n_p) : fixed, options);
}

PhaseScanTrace trace_of(const ExperimentConfig& c, const GaussianState& state, SeedStream stream) {
  const auto averages = static_cast<std::uint32_t>(c.trace_averages);
  if (!c.trace_noise) return spectrum_trace(state, c.trace_points, averages);
  Rng rng(sub_seed(c, stream));
  return spectrum_trace(state, c.trace_points, averages, rng);
}

}  // namespace

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  const PreparedExperiment prepared = prepare(config);
  const TeleporterParams& p = prepared.params;

  RunResult result;
  result.provenance = {config_hash(config), config.seed, std::string(kVersion)};
  result.calibration = prepared.calibration;
  result.report = teleport_analytic(p);
  if (options.monte_carlo) result.monte_carlo = teleport_mc(p, config.shots);

  const GaussianState seen_input = loss(p.input, 0, p.eta_hom);
  const GaussianState seen_output = loss(result.report.output_state, 0, p.eta_verify);
  if (options.traces) {
    result.input_trace = trace_of(config, seen_input, SeedStream::input_trace);
    result.output_trace = trace_of(config, seen_output, SeedStream::output_trace);
  }
  if (options.wigner) {
    result.input_wigner =
        reconstruct(config, seen_input, options.wigner_method, SeedStream::input_record);
    result.output_wigner =
        reconstruct(config, seen_output, options.wigner_method, SeedStream::output_record);
  }
  return result;
}

std::filesystem::path resolve_output_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

}  // namespace cvtele::harness
