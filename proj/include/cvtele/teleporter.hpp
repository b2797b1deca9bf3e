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

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvtele/decibel.hpp"
#include "cvtele/gaussian_state.hpp"
#include "cvtele/rng.hpp"
#include "cvtele/sideband.hpp"

namespace cvtele {

/// Knobs of one teleportation experiment.
///
/// Source 0 is squeezed in x and sets the x_A - x_B correlation; source 1 is
/// squeezed in p and sets p_A + p_B. Losses are applied in this order: one
/// channel per source output, one per propagation path (Alice's beam A, Bob's
/// beam B), and eta_hom in front of each of Alice's two detectors. eta_verify
/// models the detector that reads the teleported mode; it only affects the
/// reported variances, not the output state.
struct TeleporterParams {
  std::array<double, 2> epr_sq_db{-6.0, -6.0};
  std::array<double, 2> epr_antisq_db{6.0, 6.0};
  std::array<double, 2> eta_source{1.0, 1.0};
  std::array<double, 2> eta_prop{1.0, 1.0};
  double eta_hom = 1.0;
  double eta_verify = 1.0;
  double g_x = 1.0;
  double g_p = 1.0;
  GaussianState input = vacuum(1);
  std::uint64_t seed = 1;

  /// Throws PhysicsError on out-of-range efficiencies, non-finite gains or an
  /// unphysical squeezing pair.
  void validate() const;
  bool unity_gain() const;
};

/// Params with three pure squeezers of e^{-2r} each (EPR sources plus, if
/// squeezed_input, an x-squeezed input), lossless, unity gain.
TeleporterParams pure_squeezer_params(double r, bool squeezed_input);

/// Homodyne efficiency from fringe visibility.
double efficiency_from_visibility(double visibility);

struct EprCorrelations {
  double x_diff_variance;  ///< Var(x_A - x_B)
  double p_sum_variance;   ///< Var(p_A + p_B)

  DbValue x_db() const { return db_from_variance(x_diff_variance, kTwoModeVacuumVariance); }
  DbValue p_db() const { return db_from_variance(p_sum_variance, kTwoModeVacuumVariance); }
};

/// Two-mode state (A, B): the two squeezed sources interfered on a 50/50
/// beamsplitter, with source and propagation losses applied.
GaussianState make_epr(const TeleporterParams& params);
EprCorrelations epr_correlations(const GaussianState& epr);

struct BellOutcome {
  double u;  ///< x-port result, (x_in - x_A)/sqrt2 before detector loss
  double v;  ///< p-port result, (p_in + p_A)/sqrt2 before detector loss
  GaussianState bob;
};

/// Joint homodyne measurement on modes (input, A) of a three-mode state
/// (input, A, B). Each detector sees its port through a loss of eta_hom.
BellOutcome bell_measure(const GaussianState& input_and_epr, Rng& rng, double eta_hom = 1.0);

/// Displaces Bob's mode by (g_x sqrt2 u, g_p sqrt2 v) / sqrt(eta_hom).
/// At unity gain this gives x_out = x_in - (x_A - x_B) and
/// p_out = p_in + (p_A + p_B).
GaussianState feed_forward(const GaussianState& bob, double u, double v, double g_x, double g_p,
                           double eta_hom = 1.0);

struct TeleportReport {
  GaussianState output_state = vacuum(1);
  double vx_out = kVacuumVariance;  ///< as read by the verifying detector
  double vp_out = kVacuumVariance;
  DbValue vx_db;
  DbValue vp_db;
  /// Coherent-input fidelity estimate; only for unity gain and an input with
  /// vacuum covariance.
  std::optional<double> fidelity_coherent;
  NoisePower delta_sq_out;
  /// Input as seen through one of Alice's detectors (eta_hom).
  DbValue input_vx_db;
  DbValue input_vp_db;
  NoisePower delta_sq_in;
  DbValue epr_x_db{0.0, kTwoModeVacuumVariance};
  DbValue epr_p_db{0.0, kTwoModeVacuumVariance};
  std::optional<std::array<double, 2>> gains_measured;
};

/// Deterministic propagation of moments through the whole network.
TeleportReport teleport_analytic(const TeleporterParams& params);

struct McReport {
  TeleportReport report;
  std::size_t shots = 0;
  /// Between-shot covariance of Bob's displaced means.
  Eigen::Matrix2d shot_mean_cov = Eigen::Matrix2d::Zero();
  /// One standard error of the empirical output mean and covariance.
  Eigen::Vector2d mean_stderr = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov_stderr = Eigen::Matrix2d::Zero();
};

/// Shot-by-shot protocol: bell_measure + feed_forward, aggregated into the
/// moments of the mixture of conditional output states. Shots are processed
/// in fixed chunks of kShotChunk, chunk k drawing from
/// Rng(derive_seed(params.seed, k)), so results do not depend on threading.
McReport teleport_mc(const TeleporterParams& params, std::size_t shots);
inline constexpr std::size_t kShotChunk = 4096;

/// F = 2 / sqrt((1 + 4 Vx)(1 + 4 Vp)), variances in vacuum-1/4 units.
double coherent_fidelity(double vx_out, double vp_out);

/// Output variances for three pure squeezers with parameter r, unity gain.
std::array<double, 2> output_variances_pure(double r);

/// 10 log10(1/3): the input-referred squeezing below which an x-squeezed input
/// stays squeezed after teleportation.
DbValue squeezing_threshold_db();

struct CascadeStage {
  std::size_t stage;
  std::optional<double> fidelity;
  double vx;
  double vp;
};

/// Chains n identical teleporters, each fed the previous output state.
std::vector<CascadeStage> cascade(const TeleporterParams& params, std::size_t n_stages);

/// Ratio of analytic output to input mean for probes along x and p.
std::array<double, 2> measure_gains(const TeleporterParams& params, double probe_amplitude);

/// Infers the state in front of a detector of efficiency eta from what the
/// detector reports (inverse of loss()). Throws PhysicsError if no physical
/// state is consistent.
GaussianState undo_detection_loss(const GaussianState& measured, double eta);

}  // namespace cvtele
