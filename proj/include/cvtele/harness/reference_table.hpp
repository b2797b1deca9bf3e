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

#include <optional>
#include <string>
#include <vector>

namespace cvtele::harness {

struct ComparisonRow {
  std::string quantity;
  std::optional<double> reference;  ///< published value, if one exists
  double simulated = 0.0;
  double lo = 0.0;  ///< accepted window
  double hi = 0.0;
  bool pass = false;
};

/// Runs the built-in presets and checks every acceptance quantity.
std::vector<ComparisonRow> reproduction_table();

/// Fixed-width text table; columns quantity, reference, simulated, |delta|,
/// window, result.
std::string format_table(const std::vector<ComparisonRow>& rows);

}  // namespace cvtele::harness
