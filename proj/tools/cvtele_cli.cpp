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

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cvtele/errors.hpp"
#include "cvtele/harness/calibrate.hpp"
#include "cvtele/harness/config.hpp"
#include "cvtele/harness/reference_table.hpp"
#include "cvtele/harness/run.hpp"
#include "cvtele/harness/serialize.hpp"

namespace {

using namespace cvtele;
using namespace cvtele::harness;

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kConfig = 2,
  kPhysics = 3,
  kAcceptance = 4,
  kIo = 5,
};

struct Common {
  std::string config_file;
  std::string preset;
  std::string out;
  // --section.key flags; applied after the preset or config file.
  std::map<std::string, std::string> overrides;
};

void add_common(CLI::App* cmd, Common& common) {
  auto* cfg = cmd->add_option("-c,--config", common.config_file, "Configuration file");
  auto* pre = cmd->add_option("--preset", common.preset, "Built-in preset")
                  ->check(CLI::IsMember({"coherent", "squeezed_x", "squeezed_p", "vacuum"}));
  cfg->excludes(pre);
  cmd->add_option("-o,--out", common.out,
                  std::string("Output directory (default: run.output_dir, then $") + kOutputDirEnv +
                      ", then .)");
  for (const std::string& key : config_keys()) {
    cmd->add_option_function<std::string>(
           "--" + key, [&common, key](const std::string& v) { common.overrides[key] = v; },
           "Override " + key)
        ->group("Config keys");
  }
}

Scenario scenario_named(const std::string& name) {
  for (Scenario s : {Scenario::coherent, Scenario::squeezed_x, Scenario::squeezed_p, Scenario::vacuum})
    if (name == to_string(s)) return s;
  throw ConfigError(0, "--preset", "unknown preset '" + name + "'");
}

ExperimentConfig load_config(const Common& common) {
  ExperimentConfig config;
  if (!common.preset.empty()) {
    config = preset_config(scenario_named(common.preset));
  } else if (!common.config_file.empty()) {
    const std::string text = read_text_file(common.config_file);
    try {
      config = parse_config(text);
    } catch (const ConfigError& e) {
      throw ConfigError(e.line(), e.key(), common.config_file + ": " + e.message());
    }
  }
  for (const auto& [key, value] : common.overrides) set_config_value(config, key, value);
  validate_config(config);
  return config;
}

std::filesystem::path output_dir(const Common& common, const ExperimentConfig& config) {
  return resolve_output_dir(common.out.empty() ? config.output_dir : common.out);
}

void print_report(const TeleportReport& r) {
  std::printf("Vx_out %+.4f dB  Vp_out %+.4f dB\n", r.vx_db.db, r.vp_db.db);
  std::printf("EPR x %+.4f dB  p %+.4f dB\n", r.epr_x_db.db, r.epr_p_db.db);
  if (r.fidelity_coherent) std::printf("fidelity %.4f\n", *r.fidelity_coherent);
  std::printf("delta_sq in %.4f  out %.4f\n", r.delta_sq_in.value, r.delta_sq_out.value);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Broadband continuous-variable teleportation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common common;
  bool mc = false;
  std::string side = "output";
  std::string method = "radon";
  std::size_t stages = 4;

  auto* run_cmd = app.add_subcommand("run", "Teleport once and write report.json");
  add_common(run_cmd, common);
  run_cmd->add_flag("--mc", mc, "Also run the Monte Carlo path (run.shots shots)");

  auto* trace_cmd = app.add_subcommand("trace", "Write a phase-scanned noise trace to trace.csv");
  add_common(trace_cmd, common);
  trace_cmd->add_option("--side", side, "input or output")->check(CLI::IsMember({"input", "output"}));

  auto* wigner_cmd = app.add_subcommand("wigner", "Write a reconstructed Wigner grid to wigner.csv");
  add_common(wigner_cmd, common);
  wigner_cmd->add_option("--side", side, "input or output")->check(CLI::IsMember({"input", "output"}));
  wigner_cmd->add_option("--method", method, "radon or analytic")
      ->check(CLI::IsMember({"radon", "analytic"}));

  auto* cascade_cmd = app.add_subcommand("cascade", "Teleport repeatedly; write cascade.csv");
  add_common(cascade_cmd, common);
  cascade_cmd->add_option("--stages", stages, "Number of stages")->check(CLI::Range(1, 1000));

  auto* calibrate_cmd = app.add_subcommand("calibrate", "Fit source efficiencies to EPR targets");
  add_common(calibrate_cmd, common);

  auto* repro_cmd = app.add_subcommand("paper-repro", "Compare built-in presets with published values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (repro_cmd->parsed()) {
      const auto rows = reproduction_table();
      std::cout << format_table(rows);
      for (const auto& r : rows)
        if (!r.pass) return kAcceptance;
      return kOk;
    }

    const ExperimentConfig config = load_config(common);
    const auto dir = output_dir(common, config);

    if (run_cmd->parsed()) {
      RunOptions options;
      options.monte_carlo = mc;
      const RunResult result = run(config, options);
      write_text_file(dir / "report.json", to_json(result).dump(2) + "\n");
      print_report(result.report);
      std::printf("wrote %s\n", (dir / "report.json").string().c_str());
    } else if (trace_cmd->parsed()) {
      RunOptions options;
      options.traces = true;
      const RunResult result = run(config, options);
      const auto& trace = side == "input" ? *result.input_trace : *result.output_trace;
      write_text_file(dir / "trace.csv", trace_csv(trace));
      std::printf("wrote %s (%zu points)\n", (dir / "trace.csv").string().c_str(), trace.points.size());
    } else if (wigner_cmd->parsed()) {
      RunOptions options;
      options.wigner = true;
      options.wigner_method = method == "analytic" ? WignerMethod::analytic : WignerMethod::radon;
      const RunResult result = run(config, options);
      const auto& grid = side == "input" ? *result.input_wigner : *result.output_wigner;
      write_text_file(dir / "wigner.csv", wigner_csv(grid));
      std::printf("wrote %s (%zu x %zu)\n", (dir / "wigner.csv").string().c_str(), grid.spec.n_x,
                  grid.spec.n_p);
    } else if (cascade_cmd->parsed()) {
      const PreparedExperiment prepared = prepare(config);
      const auto result = cascade(prepared.params, stages);
      std::string csv = "stage,fidelity,vx_db,vp_db\n";
      for (const auto& s : result) {
        csv += std::to_string(s.stage) + "," + (s.fidelity ? format_number(*s.fidelity) : "") + "," +
               format_number(db_from_variance(s.vx).db) + "," + format_number(db_from_variance(s.vp).db) +
               "\n";
      }
      std::cout << csv;
      write_text_file(dir / "cascade.csv", csv);
    } else if (calibrate_cmd->parsed()) {
      ExperimentConfig c = config;
      c.calibrate = true;
      const PreparedExperiment prepared = prepare(c);
      const std::string text = to_json(*prepared.calibration).dump(2) + "\n";
      std::cout << text;
      write_text_file(dir / "calibration.json", text);
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << '\n';
    return kPhysics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
