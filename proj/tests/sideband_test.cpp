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

#include <cmath>
#include <numbers>

#include "cvtele/gaussian_state.hpp"
#include "cvtele/sideband.hpp"

using namespace cvtele;

namespace {

const double kSixDbR = 0.5 * std::log(std::pow(10.0, 0.6));

GaussianState diag_state(double vx, double vp) {
  return GaussianState(Eigen::Vector2d::Zero(), Eigen::Matrix2d(Eigen::Vector2d(vx, vp).asDiagonal()));
}

// The map written out on (x, p, x2, p2), with the mirror built from an
// independent copy (x2, p2) as x~ = -p2, p~ = x2.
Eigen::Matrix4d sideband_map() {
  const double h = std::sqrt(0.5);
  Eigen::Matrix4d m;
  m << h, 0, 0, -h,  // x+ = (x + x~)/sqrt2
      0, h, h, 0,    // p+ = (p + p~)/sqrt2
      h, 0, 0, h,    // x- = (x - x~)/sqrt2
      0, h, -h, 0;   // p- = (p - p~)/sqrt2
  return m;
}

}  // namespace

TEST(Sidebands, VacuumGivesUncorrelatedVacua) {
  const SidebandPair pair = sidebands_from_single_mode(vacuum(1));
  EXPECT_LT((pair.cov - 0.25 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(delta_sq(pair).value, 1.0, 1e-15);
}

TEST(Sidebands, PureSixDbGivesThermalSidebandsAndCorrelations) {
  const GaussianState s = squeeze(vacuum(1), 0, kSixDbR);
  const SidebandPair pair = sidebands_from_single_mode(s);
  const double thermal = 0.25 * (std::pow(10.0, -0.6) + std::pow(10.0, 0.6)) / 2.0;
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(pair.cov(i, i), thermal, 1e-12);
  EXPECT_NEAR(delta_sq(pair).value, std::pow(10.0, -0.6), 1e-12);
  EXPECT_NEAR(delta_sq(pair).value, 0.251, 5e-4);
}

TEST(Sidebands, MatchesExplicitLinearMap) {
  GaussianState s = squeeze(vacuum(1), 0, 0.8, 0.37);
  s = loss(displace(s, 0, 0.3, -1.1), 0, 0.7);
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c.block<2, 2>(0, 0) = s.cov();
  c.block<2, 2>(2, 2) = s.cov();
  Eigen::Vector4d mu;
  mu << s.mean(), s.mean();
  const Eigen::Matrix4d m = sideband_map();
  const SidebandPair pair = sidebands_from_single_mode(s);
  EXPECT_LT((pair.cov - m * c * m.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((pair.mean - m * mu).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Sidebands, ImpureInputDeltaSq) {
  const GaussianState s = impure_squeezed_vacuum({-6.2}, {12.0});
  EXPECT_NEAR(delta_sq(sidebands_from_single_mode(s)).value, 0.240, 0.0005);
}

TEST(DeltaSq, OutputLevel) {
  const GaussianState s = diag_state(0.25 * std::pow(10.0, -0.08), 0.25 * std::pow(10.0, 1.24));
  EXPECT_NEAR(delta_sq(sidebands_from_single_mode(s)).value, 0.832, 5e-4);
}

TEST(DeltaSq, EqualsNoisePowerAtZeroForDiagonalStates) {
  for (double vx : {0.03, 0.06, 0.2, 0.25, 0.4}) {
    for (double vp : {0.25 * 0.25 / vx, 1.0, 4.0}) {
      const GaussianState s = diag_state(vx, std::max(vp, 0.0625 / vx));
      EXPECT_NEAR(delta_sq(sidebands_from_single_mode(s)).value,
                  noise_power_from_single_mode(s, 0.0).value, 1e-12);
    }
  }
}

TEST(DeltaSq, DecreasesWithSqueezingAtFixedAntiSqueezing) {
  double prev = 2.0;
  for (double db = 0.0; db >= -10.0; db -= 0.5) {
    const double v = delta_sq(sidebands_from_single_mode(impure_squeezed_vacuum({db}, {12.0}))).value;
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(DeltaSq, SidebandPairIsPhysical) {
  for (double r : {0.0, 0.3, 1.2}) {
    for (double eta : {0.2, 1.0}) {
      const GaussianState s = loss(squeeze(vacuum(1), 0, r, 0.9), 0, eta);
      for (double nu : symplectic_eigenvalues(sidebands_from_single_mode(s).as_state()))
        EXPECT_GE(nu, 0.25 - 1e-9);
    }
  }
}

TEST(NoisePowerFromSingleMode, Examples) {
  EXPECT_NEAR(noise_power_from_single_mode(vacuum(1), 0.4).value, 1.0, 1e-15);
  const GaussianState s = impure_squeezed_vacuum({-6.2}, {12.0});
  EXPECT_NEAR(noise_power_from_single_mode(s, 0.0).value, 0.240, 5e-4);
  EXPECT_NEAR(noise_power_from_single_mode(s, std::numbers::pi / 2).value, 15.85, 0.01);
}

TEST(IsEntangled, VacuumIsNotEntangled) {
  const auto v = is_entangled(sidebands_from_single_mode(vacuum(1)));
  EXPECT_FALSE(v.entangled);
  EXPECT_NEAR(v.margin, 0.0, 1e-12);
}

TEST(IsEntangled, OutputLevelIsEntangled) {
  const GaussianState s = diag_state(0.25 * 0.83, 0.25 / 0.83);
  const auto v = is_entangled(sidebands_from_single_mode(s));
  EXPECT_TRUE(v.entangled);
  EXPECT_NEAR(v.margin, 0.17, 1e-12);
}

TEST(IsEntangled, ThermalIsNotEntangled) {
  const GaussianState s = diag_state(0.25 * 1.2, 0.25 * 1.2);
  const auto v = is_entangled(sidebands_from_single_mode(s));
  EXPECT_FALSE(v.entangled);
  EXPECT_NEAR(v.margin, -0.2, 1e-12);
}
