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

#include "cvtele/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cvtele/errors.hpp"

namespace cvtele {
namespace {

constexpr double kPi = std::numbers::pi;

double signal_power(const GaussianState& state, double theta) {
  const double m = marginal_mean(state, {0, theta});
  return (marginal_variance(state, {0, theta}) + m * m) / kVacuumVariance;
}

void check_single_mode(const GaussianState& state, const char* what) {
  if (state.n_modes() != 1) {
    throw std::invalid_argument(std::string(what) + " expects a single-mode state");
  }
}

// Folds theta into [0, pi); a reading at theta + pi is minus the reading at theta.
QuadratureSample fold(QuadratureSample s) {
  double t = std::fmod(s.theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= kPi) {
    t -= kPi;
    s.value = -s.value;
  }
  s.theta = t;
  return s;
}

// Band-limited ramp |k| with cutoff w (cycles per unit), in real space.
double ramp_kernel(double t, double w) {
  if (t == 0.0) return w * w;
  const double arg = 2.0 * kPi * w * t;
  return 2.0 * (w * std::sin(arg) / (2.0 * kPi * t) +
                (std::cos(arg) - 1.0) / (4.0 * kPi * kPi * t * t));
}

struct AxisStats {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

AxisStats stats_near(const std::vector<QuadratureSample>& folded, double theta, double window) {
  double sum = 0.0, sum2 = 0.0;
  std::size_t n = 0;
  for (const auto& s : folded) {
    double value = s.value;
    double d = s.theta - theta;
    if (d > kPi / 2) {
      d -= kPi;
      value = -value;
    }
    if (std::abs(d) < window) {
      sum += value;
      sum2 += value * value;
      ++n;
    }
  }
  if (n < 2) return {};
  const double mean = sum / static_cast<double>(n);
  const double var = std::max(0.0, sum2 / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var), n};
}

// Affine frame of a record: mean vector and Cholesky factor of the
// covariance, fitted by least squares to the per-phase-bin moments
//   m(theta) = mu_x cos + mu_p sin,
//   v(theta) = a cos^2 + 2 c cos sin + b sin^2.
struct Frame {
  Eigen::Vector2d mean;
  Eigen::Matrix2d chol;
};

Frame estimate_frame(const std::vector<QuadratureSample>& folded, std::size_t n_bins) {
  std::vector<double> sum(n_bins, 0.0), sum2(n_bins, 0.0), theta(n_bins, 0.0);
  std::vector<std::size_t> count(n_bins, 0);
  for (const auto& s : folded) {
    const auto b = std::min(n_bins - 1, static_cast<std::size_t>(s.theta / kPi * n_bins));
    sum[b] += s.value;
    sum2[b] += s.value * s.value;
    theta[b] += s.theta;
    ++count[b];
  }
  Eigen::Matrix2d mean_normal = Eigen::Matrix2d::Zero();
  Eigen::Vector2d mean_rhs = Eigen::Vector2d::Zero();
  Eigen::Matrix3d var_normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d var_rhs = Eigen::Vector3d::Zero();
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (count[b] < 2) continue;
    const double n = static_cast<double>(count[b]);
    const double t = theta[b] / n;
    const double m = sum[b] / n;
    const double v = (sum2[b] - n * m * m) / (n - 1.0);
    const Eigen::Vector2d fm(std::cos(t), std::sin(t));
    const Eigen::Vector3d fv(std::cos(t) * std::cos(t), 2.0 * std::cos(t) * std::sin(t),
                             std::sin(t) * std::sin(t));
    mean_normal += n * fm * fm.transpose();
    mean_rhs += n * m * fm;
    var_normal += n * fv * fv.transpose();
    var_rhs += n * v * fv;
  }
  const Eigen::Vector2d mu = mean_normal.ldlt().solve(mean_rhs);
  const Eigen::Vector3d abc = var_normal.ldlt().solve(var_rhs);
  Eigen::Matrix2d cov;
  cov << abc(0), abc(1), abc(1), abc(2);
  Eigen::LLT<Eigen::Matrix2d> llt(cov);
  if (llt.info() != Eigen::Success || !mu.allFinite()) {
    throw std::invalid_argument("record moments are degenerate");
  }
  return {mu, llt.matrixL()};
}

}  // namespace

PhaseScanTrace spectrum_trace(const GaussianState& state, std::size_t n_points,
                              std::uint32_t averages, double span) {
  check_single_mode(state, "spectrum trace");
  if (n_points == 0 || averages == 0) {
    throw std::invalid_argument("trace needs at least one point and one average");
  }
  PhaseScanTrace trace{{}, averages, span};
  trace.points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double theta = span * static_cast<double>(k) / static_cast<double>(n_points);
    trace.points.push_back({theta, ratio_to_db(signal_power(state, theta))});
  }
  return trace;
}

PhaseScanTrace spectrum_trace(const GaussianState& state, std::size_t n_points,
                              std::uint32_t averages, Rng& rng, double span) {
  PhaseScanTrace trace = spectrum_trace(state, n_points, averages, span);
  for (auto& point : trace.points) {
    point.power_db += ratio_to_db(rng.unit_gamma(averages));
  }
  return trace;
}

QuadratureRecord sample_record(const GaussianState& state, std::size_t n_samples,
                               const PhaseSchedule& schedule, Rng& rng) {
  check_single_mode(state, "quadrature record");
  if (n_samples == 0) {
    throw std::invalid_argument("record needs at least one sample");
  }
  QuadratureRecord record;
  record.samples.reserve(n_samples);
  const double step = (schedule.stop - schedule.start) / static_cast<double>(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double theta = schedule.start + step * static_cast<double>(k);
    const QuadratureAxis axis{0, theta};
    record.samples.push_back(
        {theta, rng.normal(marginal_mean(state, axis), std::sqrt(marginal_variance(state, axis)))});
  }
  return record;
}

double GridSpec::dx() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
double GridSpec::dp() const { return (p_max - p_min) / static_cast<double>(n_p - 1); }
double GridSpec::x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }
double GridSpec::p(std::size_t j) const { return p_min + dp() * static_cast<double>(j); }

void GridSpec::validate() const {
  if (n_x < 2 || n_p < 2 || !(x_max > x_min) || !(p_max > p_min)) {
    throw std::invalid_argument("grid needs at least 2x2 points over a non-empty window");
  }
}

GridSpec grid_for_state(const GaussianState& state, std::size_t n_x, std::size_t n_p,
                        double sigmas) {
  check_single_mode(state, "grid sizing");
  const double hx = sigmas * std::sqrt(state.cov()(0, 0));
  const double hp = sigmas * std::sqrt(state.cov()(1, 1));
  const Eigen::Vector2d m = state.mode_mean(0);
  return {m(0) - hx, m(0) + hx, n_x, m(1) - hp, m(1) + hp, n_p};
}

GridSpec grid_for_record(const QuadratureRecord& record, std::size_t n_x, std::size_t n_p,
                         double sigmas) {
  std::vector<QuadratureSample> folded;
  folded.reserve(record.samples.size());
  for (const auto& s : record.samples) folded.push_back(fold(s));
  const double window = kPi / 36.0;
  const AxisStats sx = stats_near(folded, 0.0, window);
  const AxisStats sp = stats_near(folded, kPi / 2, window);
  if (sx.count == 0 || sp.count == 0) {
    throw std::invalid_argument("record does not cover the x and p axes");
  }
  return {sx.mean - sigmas * sx.stddev, sx.mean + sigmas * sx.stddev, n_x,
          sp.mean - sigmas * sp.stddev, sp.mean + sigmas * sp.stddev, n_p};
}

double WignerGrid::integral() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * spec.dx() * spec.dp();
}

WignerGrid wigner_analytic(const GaussianState& state, const GridSpec& grid) {
  check_single_mode(state, "Wigner evaluation");
  grid.validate();
  const Eigen::Matrix2d sigma = state.mode_cov(0);
  const double det = sigma.determinant();
  if (!(det > 0.0)) {
    throw PhysicsError("singular covariance has no Wigner density");
  }
  const Eigen::Matrix2d inv = sigma.inverse();
  const double norm = 1.0 / (2.0 * kPi * std::sqrt(det));
  const Eigen::Vector2d m = state.mode_mean(0);
  WignerGrid w{grid, std::vector<double>(grid.n_x * grid.n_p)};
  for (std::size_t i = 0; i < grid.n_x; ++i) {
    for (std::size_t j = 0; j < grid.n_p; ++j) {
      const Eigen::Vector2d d(grid.x(i) - m(0), grid.p(j) - m(1));
      w.at(i, j) = norm * std::exp(-0.5 * d.dot(inv * d));
    }
  }
  return w;
}

WignerGrid inverse_radon(const QuadratureRecord& record, const GridSpec& grid,
                         const RadonOptions& options) {
  grid.validate();
  if (record.samples.size() < 1000) {
    throw std::invalid_argument("inverse Radon needs at least 1000 samples");
  }
  if (!(options.filter_cutoff > 0.0 && options.filter_cutoff <= 1.0) || options.phase_bins < 2 ||
      !(options.bin_fraction > 0.0) || !(options.field_of_view > 0.0)) {
    throw std::invalid_argument("invalid inverse Radon options");
  }
  const std::size_t n_bins = options.phase_bins;

  std::vector<QuadratureSample> folded;
  folded.reserve(record.samples.size());
  std::vector<std::size_t> lab_counts(n_bins, 0);
  for (const auto& raw : record.samples) {
    folded.push_back(fold(raw));
    ++lab_counts[std::min(n_bins - 1, static_cast<std::size_t>(folded.back().theta / kPi * n_bins))];
  }
  const auto populated_lab =
      std::count_if(lab_counts.begin(), lab_counts.end(), [](std::size_t c) { return c > 0; });
  if (static_cast<double>(populated_lab) < options.min_coverage * static_cast<double>(n_bins)) {
    throw std::invalid_argument("insufficient phase coverage: record must span [0, pi)");
  }

  // Reconstruct in whitened coordinates z' = L^-1 (z - mu), with mu and
  // L L^T estimated from the record. A reading q at angle theta becomes
  // q' = (q - n.mu) / |L^T n| at the angle of L^T n, so the Radon data stay
  // exact while the state becomes close to isotropic.
  const Frame frame = estimate_frame(folded, n_bins);
  std::vector<std::vector<double>> bins(n_bins);
  std::vector<double> bin_theta(n_bins, 0.0);
  double max_abs = 0.0;
  for (const auto& s : folded) {
    const Eigen::Vector2d n(std::cos(s.theta), std::sin(s.theta));
    const Eigen::Vector2d w = frame.chol.transpose() * n;
    const double rho = w.norm();
    QuadratureSample white = fold({std::atan2(w(1), w(0)), (s.value - n.dot(frame.mean)) / rho});
    const auto b = std::min(n_bins - 1, static_cast<std::size_t>(white.theta / kPi * n_bins));
    bins[b].push_back(white.value);
    bin_theta[b] += white.theta;
    max_abs = std::max(max_abs, std::abs(white.value));
  }
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (!bins[b].empty()) bin_theta[b] /= static_cast<double>(bins[b].size());
  }

  // Grid corners in the whitened frame bound the projections we must evaluate.
  const Eigen::Matrix2d to_white = frame.chol.inverse();
  double grid_radius = 0.0;
  for (double x : {grid.x_min, grid.x_max}) {
    for (double p : {grid.p_min, grid.p_max}) {
      grid_radius = std::max(grid_radius, (to_white * (Eigen::Vector2d(x, p) - frame.mean)).norm());
    }
  }
  const double tau = options.bin_fraction;
  const double half_range =
      std::max(max_abs, std::min(grid_radius, options.field_of_view)) + 4.0 * tau;
  const auto half = static_cast<std::ptrdiff_t>(std::ceil(half_range / tau));
  const auto n_q = static_cast<std::size_t>(2 * half + 1);
  const double q0 = -static_cast<double>(half) * tau;

  const double cutoff = options.filter_cutoff / (2.0 * tau);
  std::vector<double> kernel(2 * n_q - 1);
  for (std::size_t k = 0; k < kernel.size(); ++k) {
    const double t = (static_cast<double>(k) - static_cast<double>(n_q - 1)) * tau;
    kernel[k] = ramp_kernel(t, cutoff);
  }

  struct Projection {
    double cos_t, sin_t;
    std::vector<double> filtered;
  };
  std::vector<Projection> projections;
  std::vector<double> density(n_q);
  for (std::size_t b = 0; b < n_bins; ++b) {
    if (bins[b].empty()) continue;
    std::fill(density.begin(), density.end(), 0.0);
    const double weight = 1.0 / (static_cast<double>(bins[b].size()) * tau);
    for (double v : bins[b]) {
      const auto m = static_cast<std::ptrdiff_t>(std::floor((v - q0) / tau + 0.5));
      if (m >= 0 && m < static_cast<std::ptrdiff_t>(n_q)) {
        density[static_cast<std::size_t>(m)] += weight;
      }
    }
    Projection proj{std::cos(bin_theta[b]), std::sin(bin_theta[b]), std::vector<double>(n_q, 0.0)};
    for (std::size_t k = 0; k < n_q; ++k) {
      if (density[k] == 0.0) continue;
      const double dk = density[k] * tau;
      const double* row = kernel.data() + (n_q - 1) - k;
      for (std::size_t m = 0; m < n_q; ++m) proj.filtered[m] += row[m] * dk;
    }
    projections.push_back(std::move(proj));
  }

  WignerGrid w{grid, std::vector<double>(grid.n_x * grid.n_p, 0.0)};
  const double dtheta = kPi / static_cast<double>(projections.size());
  const double jacobian = 1.0 / frame.chol.determinant();
  for (std::size_t i = 0; i < grid.n_x; ++i) {
    for (std::size_t j = 0; j < grid.n_p; ++j) {
      const Eigen::Vector2d z = to_white * (Eigen::Vector2d(grid.x(i), grid.p(j)) - frame.mean);
      if (z.norm() > options.field_of_view) continue;
      double sum = 0.0;
      for (const auto& proj : projections) {
        const double pos = (z(0) * proj.cos_t + z(1) * proj.sin_t - q0) / tau;
        const auto m = static_cast<std::ptrdiff_t>(std::floor(pos));
        if (m < 0 || m + 1 >= static_cast<std::ptrdiff_t>(n_q)) continue;
        const double frac = pos - static_cast<double>(m);
        sum += (1.0 - frac) * proj.filtered[static_cast<std::size_t>(m)] +
               frac * proj.filtered[static_cast<std::size_t>(m + 1)];
      }
      w.at(i, j) = sum * dtheta * jacobian;
    }
  }
  return w;
}

WignerMoments wigner_moments(const WignerGrid& grid) {
  const GridSpec& g = grid.spec;
  g.validate();
  if (grid.values.size() != g.n_x * g.n_p) {
    throw std::invalid_argument("grid values do not match geometry");
  }
  const double area = g.dx() * g.dp();
  double norm = 0.0;
  Eigen::Vector2d first = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < g.n_x; ++i) {
    for (std::size_t j = 0; j < g.n_p; ++j) {
      const double w = grid.at(i, j) * area;
      norm += w;
      first += w * Eigen::Vector2d(g.x(i), g.p(j));
    }
  }
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw PhysicsError("Wigner grid is not normalizable");
  }
  const Eigen::Vector2d mean = first / norm;
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (std::size_t i = 0; i < g.n_x; ++i) {
    for (std::size_t j = 0; j < g.n_p; ++j) {
      const Eigen::Vector2d d(g.x(i) - mean(0), g.p(j) - mean(1));
      cov += (grid.at(i, j) * area) * d * d.transpose();
    }
  }
  return {mean, cov / norm, norm};
}

}  // namespace cvtele
