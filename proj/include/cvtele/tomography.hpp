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

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "cvtele/gaussian_state.hpp"
#include "cvtele/rng.hpp"

namespace cvtele {

struct TracePoint {
  double theta;
  double power_db;  ///< relative to vacuum
};

/// Spectrum-analyzer trace with the local-oscillator phase scanned.
struct PhaseScanTrace {
  std::vector<TracePoint> points;
  std::uint32_t averages = 1;
  double span = 2.0 * std::numbers::pi;
};

/// Noise power (variance + signal mean^2) / (1/4) at n_points phases evenly
/// spaced over [0, span). Noiseless.
PhaseScanTrace spectrum_trace(const GaussianState& state, std::size_t n_points,
                              std::uint32_t averages,
                              double span = 2.0 * std::numbers::pi);

/// As above, with each point scaled by a Gamma(averages, 1/averages) factor:
/// a single sweep's power reading is exponentially distributed and
/// 'averages' sweeps are averaged.
PhaseScanTrace spectrum_trace(const GaussianState& state, std::size_t n_points,
                              std::uint32_t averages, Rng& rng,
                              double span = 2.0 * std::numbers::pi);

struct QuadratureSample {
  double theta;
  double value;
};

struct QuadratureRecord {
  std::vector<QuadratureSample> samples;
  std::string source;
  std::uint64_t seed = 0;
};

/// Linear local-oscillator sweep: sample k sits at start + (stop - start) k / n.
struct PhaseSchedule {
  double start = 0.0;
  double stop = std::numbers::pi;
};

QuadratureRecord sample_record(const GaussianState& state, std::size_t n_samples,
                               const PhaseSchedule& schedule, Rng& rng);

struct GridSpec {
  double x_min = -3.0;
  double x_max = 3.0;
  std::size_t n_x = 81;
  double p_min = -3.0;
  double p_max = 3.0;
  std::size_t n_p = 81;

  double dx() const;
  double dp() const;
  double x(std::size_t i) const;
  double p(std::size_t j) const;
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Window holding +-sigmas standard deviations of the state around its mean.
GridSpec grid_for_state(const GaussianState& state, std::size_t n_x = 81, std::size_t n_p = 81,
                        double sigmas = 5.0);
/// Same, estimated from the samples nearest theta = 0 and theta = pi/2.
GridSpec grid_for_record(const QuadratureRecord& record, std::size_t n_x = 81,
                         std::size_t n_p = 81, double sigmas = 5.0);

/// W(x, p) on a grid, values row-major with x as the row index.
struct WignerGrid {
  GridSpec spec;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * spec.n_p + j]; }
  double& at(std::size_t i, std::size_t j) { return values[i * spec.n_p + j]; }
  double integral() const;
};

WignerGrid wigner_analytic(const GaussianState& state, const GridSpec& grid);

struct RadonOptions {
  /// Ramp filter cutoff as a fraction of the sinogram's Nyquist frequency.
  double filter_cutoff = 0.75;
  std::size_t phase_bins = 120;
  /// Quadrature bin width in whitened units (record standard deviations).
  double bin_fraction = 0.2;
  /// Radius, in whitened units, of the disk outside which the reconstruction
  /// is set to zero.
  double field_of_view = 5.0;
  /// Minimum populated fraction of phase bins.
  double min_coverage = 0.8;
};

/// Filtered back-projection of a phase-scanned quadrature record.
///
/// The record's mean and covariance are estimated first and the inversion
/// runs in the whitened frame z' = L^-1 (z - mu), where the state is close to
/// isotropic; the Radon transform commutes with this change of variables, so
/// only the conditioning of the inversion changes. Pixels outside the
/// field-of-view disk are zero.
WignerGrid inverse_radon(const QuadratureRecord& record, const GridSpec& grid,
                         const RadonOptions& options = {});

struct WignerMoments {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
  double norm;
};

WignerMoments wigner_moments(const WignerGrid& grid);

}  // namespace cvtele
