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

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "cvtele/harness/run.hpp"

namespace cvtele::harness {

nlohmann::json to_json(const RunResult& result);
/// Inverse of to_json; states are re-validated. Throws nlohmann::json
/// exceptions on malformed input and PhysicsError on unphysical states.
RunResult run_result_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CalibrationResult& calibration);

/// Shortest decimal form that reads back to the same double.
std::string format_number(double v);

std::string trace_csv(const PhaseScanTrace& trace);
std::string wigner_csv(const WignerGrid& grid);

/// Readers for the two CSV layouts. Trace averages and span are not stored
/// in the CSV and come back as defaults.
PhaseScanTrace parse_trace_csv(std::string_view text);
WignerGrid parse_wigner_csv(std::string_view text);

/// Writes text (LF line endings, UTF-8) creating parent directories.
/// Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace cvtele::harness
