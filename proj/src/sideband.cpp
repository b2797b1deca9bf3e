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

#include "cvtele/sideband.hpp"

#include <stdexcept>

namespace cvtele {
namespace {

// Vacuum value of Var(x+ + x-) + Var(p+ - p-).
constexpr double kDeltaSqVacuum = 4.0 * kVacuumVariance;

}  // namespace

GaussianState SidebandPair::as_state() const {
  return GaussianState(Eigen::VectorXd(mean), Eigen::MatrixXd(cov));
}

SidebandPair sidebands_from_single_mode(const GaussianState& state) {
  if (state.n_modes() != 1) {
    throw std::invalid_argument("sideband decomposition expects a single-mode state");
  }
  // Mirror mode: (x, p) -> (-p, x), written out so that vacuum stays exact.
  const Eigen::Matrix2d quarter_turn{{0.0, -1.0}, {1.0, 0.0}};
  const GaussianState mirror(quarter_turn * state.mode_mean(0),
                             Eigen::MatrixXd(quarter_turn * state.mode_cov(0) *
                                             quarter_turn.transpose()));
  const GaussianState mixed = beamsplitter(state.tensor(mirror), 0, 1, 0.5);
  // The beamsplitter leaves -(a - a~)/sqrt2 in mode 1.
  const Eigen::Vector4d flip(1.0, 1.0, -1.0, -1.0);
  const GaussianState pair(flip.asDiagonal() * mixed.mean(),
                           Eigen::MatrixXd(flip.asDiagonal() * mixed.cov() * flip.asDiagonal()));
  return SidebandPair{pair.mean(), pair.cov()};
}

NoisePower delta_sq(const SidebandPair& pair) {
  const Eigen::Vector4d sum_x(1.0, 0.0, 1.0, 0.0);
  const Eigen::Vector4d diff_p(0.0, 1.0, 0.0, -1.0);
  const double total = sum_x.dot(pair.cov * sum_x) + diff_p.dot(pair.cov * diff_p);
  return NoisePower{total / kDeltaSqVacuum};
}

NoisePower noise_power_from_single_mode(const GaussianState& state, double theta) {
  if (state.n_modes() != 1) {
    throw std::invalid_argument("noise power expects a single-mode state");
  }
  return NoisePower{marginal_variance(state, {0, theta}) / kVacuumVariance};
}

EntanglementVerdict is_entangled(const SidebandPair& pair) {
  const double value = delta_sq(pair).value;
  return EntanglementVerdict{value < 1.0, 1.0 - value};
}

}  // namespace cvtele
