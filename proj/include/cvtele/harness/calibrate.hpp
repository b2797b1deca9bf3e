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
#include <optional>

#include "cvtele/gaussian_state.hpp"
#include "cvtele/teleporter.hpp"

namespace cvtele::harness {

struct CalibrationTarget {
  double epr_x_db = -5.6;
  double epr_p_db = -5.5;
  /// Source levels and the propagation losses held fixed during the fit.
  TeleporterParams base;
  /// Optional input squeezing/anti-squeezing as read by Alice's detectors.
  std::optional<std::array<double, 2>> input_db;
};

struct CalibrationResult {
  std::array<double, 2> eta_source{1.0, 1.0};
  std::array<double, 2> achieved_db{};
  std::array<double, 2> residual_db{};
  /// State in front of Alice's detectors consistent with input_db.
  std::optional<GaussianState> inferred_input;
};

/// Fits the two source efficiencies so make_epr reproduces the target
/// correlations. Each efficiency is found by bisection with the other held
/// fixed, alternating until both settle (they only couple through unequal
/// propagation losses). Throws PhysicsError when a target is outside what the
/// sources can reach.
CalibrationResult calibrate_losses(const CalibrationTarget& target);

}  // namespace cvtele::harness
