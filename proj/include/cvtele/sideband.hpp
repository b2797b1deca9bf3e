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

#include <Eigen/Dense>

#include "cvtele/gaussian_state.hpp"

namespace cvtele {

/// Upper/lower sideband modes at +-Omega_s, quadratures ordered
/// (x+, p+, x-, p-).
struct SidebandPair {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = kVacuumVariance * Eigen::Matrix4d::Identity();

  GaussianState as_state() const;
};

/// Spectrum-analyzer noise power, normalized so vacuum reads 1.
struct NoisePower {
  double value = 1.0;

  double db() const { return ratio_to_db(value); }
};

/// Decomposes one effective RF mode into its two sidebands.
///
/// The RF mode a is paired with its mirror mode a~, the same spectrum rotated
/// by pi/2 (flat spectrum across the resolution bandwidth), and
///   a+ = (a + a~)/sqrt2,   a- = (a - a~)/sqrt2.
/// Then x+ + x- = sqrt2 x_a and p+ - p- = sqrt2 p_a~ both carry the RF mode's
/// x statistics, while x+ - x- and p+ + p- carry its p statistics. The map is
/// a passive symplectic, so the pair is physical whenever the input is.
SidebandPair sidebands_from_single_mode(const GaussianState& state);

/// Var(x+ + x-) + Var(p+ - p-), normalized to its vacuum value of 1.
NoisePower delta_sq(const SidebandPair& pair);

/// marginal_variance(theta) / (1/4).
NoisePower noise_power_from_single_mode(const GaussianState& state, double theta);

struct EntanglementVerdict {
  bool entangled = false;
  /// 1 - delta_sq; positive when the sufficient criterion is met.
  double margin = 0.0;
};

EntanglementVerdict is_entangled(const SidebandPair& pair);

}  // namespace cvtele
