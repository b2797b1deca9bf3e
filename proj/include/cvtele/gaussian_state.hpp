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

#include <cstddef>
#include <span>
#include <vector>

#include "cvtele/decibel.hpp"
#include "cvtele/rng.hpp"

namespace cvtele {

/// Gaussian state of n bosonic modes. Quadratures are ordered
/// x1, p1, ..., xn, pn and vacuum has covariance I/4 (hbar = 1/2).
///
/// The public constructor enforces the state invariants (symmetric
/// covariance, all symplectic eigenvalues >= 1/4) and throws PhysicsError
/// otherwise. Operations below are closed on physical states.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  std::size_t n_modes() const { return static_cast<std::size_t>(mean_.size() / 2); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  Eigen::Vector2d mode_mean(std::size_t mode) const;
  Eigen::Matrix2d mode_cov(std::size_t mode) const;

  /// Partial trace onto the listed modes, in the given order.
  GaussianState reduced(std::span<const std::size_t> modes) const;
  GaussianState tensor(const GaussianState& other) const;

 private:
  struct Trusted {};
  GaussianState(Trusted, Eigen::VectorXd mean, Eigen::MatrixXd cov)
      : mean_(std::move(mean)), cov_(std::move(cov)) {}
  friend GaussianState make_trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Local-oscillator axis: theta = 0 reads x, theta = pi/2 reads p.
struct QuadratureAxis {
  std::size_t mode = 0;
  double theta = 0.0;
};

/// Two-dimensional rotation by phi, acting on (x, p).
Eigen::Matrix2d rotation(double phi);

GaussianState vacuum(std::size_t n_modes);
GaussianState coherent(double x, double p);

/// Squeezes the quadrature at angle theta by e^{-r}; the conjugate one grows
/// by e^{r}.
GaussianState squeeze(const GaussianState& state, std::size_t mode, double r, double theta = 0.0);
GaussianState rotate(const GaussianState& state, std::size_t mode, double phi);
GaussianState displace(const GaussianState& state, std::size_t mode, double dx, double dp);

/// Mixes modes i and j:
///   a_i' =  sqrt(t) a_i + sqrt(1-t) a_j
///   a_j' = -sqrt(1-t) a_i + sqrt(t) a_j
GaussianState beamsplitter(const GaussianState& state, std::size_t mode_i, std::size_t mode_j,
                           double transmittance);

/// Pure-loss channel of transmittance eta (beamsplitter with vacuum, then
/// tracing out the environment).
GaussianState loss(const GaussianState& state, std::size_t mode, double eta);

/// Single-mode state with x-variance 0.25 * 10^(sq/10) and p-variance
/// 0.25 * 10^(antisq/10). Requires sq <= 0 <= antisq and a physical product.
GaussianState impure_squeezed_vacuum(DbValue squeezing, DbValue antisqueezing);

double marginal_variance(const GaussianState& state, const QuadratureAxis& axis);
double marginal_mean(const GaussianState& state, const QuadratureAxis& axis);

/// Conditions on a homodyne outcome of the given axis and returns the state of
/// the remaining modes (original order, measured mode removed).
GaussianState homodyne_condition(const GaussianState& state, const QuadratureAxis& axis,
                                 double outcome);

struct HomodyneSample {
  double outcome;
  GaussianState remaining;
};

HomodyneSample sample_homodyne(const GaussianState& state, const QuadratureAxis& axis, Rng& rng);

/// Symplectic spectrum, ascending.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

/// Sum over modes of Var_x + Var_p - 1/2 + mean_x^2 + mean_p^2; conserved by
/// passive operations.
double passive_energy(const GaussianState& state);

}  // namespace cvtele
