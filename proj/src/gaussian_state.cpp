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

#include "cvtele/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "cvtele/errors.hpp"

namespace cvtele {

GaussianState make_trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov);

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr double kUncertaintyTolerance = 1e-9;
constexpr double kMinMeasuredVariance = 1e-15;

void check_mode(const GaussianState& state, std::size_t mode) {
  if (mode >= state.n_modes()) {
    throw std::out_of_range("mode " + std::to_string(mode) + " out of range for " +
                            std::to_string(state.n_modes()) + "-mode state");
  }
}

void check_unit_interval(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Applies z -> S z on the quadratures of the listed modes.
GaussianState apply_local_symplectic(const GaussianState& state,
                                     std::span<const std::size_t> modes,
                                     const Eigen::MatrixXd& local) {
  const Eigen::Index dim = static_cast<Eigen::Index>(2 * state.n_modes());
  Eigen::MatrixXd full = Eigen::MatrixXd::Identity(dim, dim);
  for (std::size_t a = 0; a < modes.size(); ++a) {
    for (std::size_t b = 0; b < modes.size(); ++b) {
      full.block<2, 2>(2 * modes[a], 2 * modes[b]) = local.block<2, 2>(2 * a, 2 * b);
    }
  }
  return make_trusted(full * state.mean(), symmetrized(full * state.cov() * full.transpose()));
}

Eigen::VectorXd axis_vector(const GaussianState& state, const QuadratureAxis& axis) {
  check_mode(state, axis.mode);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * state.n_modes()));
  d(static_cast<Eigen::Index>(2 * axis.mode)) = std::cos(axis.theta);
  d(static_cast<Eigen::Index>(2 * axis.mode + 1)) = std::sin(axis.theta);
  return d;
}

}  // namespace

GaussianState make_trusted(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  return GaussianState(GaussianState::Trusted{}, std::move(mean), std::move(cov));
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  if (mean_.size() == 0 || mean_.size() % 2 != 0) {
    throw std::invalid_argument("mean vector must have positive even length");
  }
  if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
    throw std::invalid_argument("covariance shape does not match mean vector");
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw PhysicsError("state moments must be finite");
  }
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw PhysicsError("covariance matrix is not symmetric");
  }
  const auto nu = symplectic_eigenvalues(cov_);
  if (nu.front() < kVacuumVariance - kUncertaintyTolerance) {
    throw PhysicsError("covariance violates the uncertainty principle (symplectic eigenvalue " +
                       std::to_string(nu.front()) + " < 1/4)");
  }
}

Eigen::Vector2d GaussianState::mode_mean(std::size_t mode) const {
  check_mode(*this, mode);
  return mean_.segment<2>(static_cast<Eigen::Index>(2 * mode));
}

Eigen::Matrix2d GaussianState::mode_cov(std::size_t mode) const {
  check_mode(*this, mode);
  return cov_.block<2, 2>(static_cast<Eigen::Index>(2 * mode), static_cast<Eigen::Index>(2 * mode));
}

GaussianState GaussianState::reduced(std::span<const std::size_t> modes) const {
  if (modes.empty()) {
    throw std::invalid_argument("partial trace must keep at least one mode");
  }
  const auto k = static_cast<Eigen::Index>(modes.size());
  Eigen::VectorXd m(2 * k);
  Eigen::MatrixXd c(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    check_mode(*this, modes[a]);
    const auto ia = static_cast<Eigen::Index>(2 * modes[a]);
    m.segment<2>(2 * a) = mean_.segment<2>(ia);
    for (Eigen::Index b = 0; b < k; ++b) {
      const auto ib = static_cast<Eigen::Index>(2 * modes[b]);
      c.block<2, 2>(2 * a, 2 * b) = cov_.block<2, 2>(ia, ib);
    }
  }
  return make_trusted(std::move(m), std::move(c));
}

GaussianState GaussianState::tensor(const GaussianState& other) const {
  const Eigen::Index a = mean_.size();
  const Eigen::Index b = other.mean_.size();
  Eigen::VectorXd m(a + b);
  m << mean_, other.mean_;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(a + b, a + b);
  c.topLeftCorner(a, a) = cov_;
  c.bottomRightCorner(b, b) = other.cov_;
  return make_trusted(std::move(m), std::move(c));
}

Eigen::Matrix2d rotation(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

GaussianState vacuum(std::size_t n_modes) {
  if (n_modes == 0) {
    throw std::invalid_argument("vacuum needs at least one mode");
  }
  const auto dim = static_cast<Eigen::Index>(2 * n_modes);
  return make_trusted(Eigen::VectorXd::Zero(dim),
                      kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim));
}

GaussianState coherent(double x, double p) { return displace(vacuum(1), 0, x, p); }

GaussianState squeeze(const GaussianState& state, std::size_t mode, double r, double theta) {
  check_mode(state, mode);
  const Eigen::Matrix2d rot = rotation(theta);
  const Eigen::Matrix2d s =
      rot * Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal() * rot.transpose();
  const std::size_t modes[] = {mode};
  return apply_local_symplectic(state, modes, s);
}

GaussianState rotate(const GaussianState& state, std::size_t mode, double phi) {
  check_mode(state, mode);
  const std::size_t modes[] = {mode};
  return apply_local_symplectic(state, modes, rotation(phi));
}

GaussianState displace(const GaussianState& state, std::size_t mode, double dx, double dp) {
  check_mode(state, mode);
  Eigen::VectorXd m = state.mean();
  m(static_cast<Eigen::Index>(2 * mode)) += dx;
  m(static_cast<Eigen::Index>(2 * mode + 1)) += dp;
  return make_trusted(std::move(m), state.cov());
}

GaussianState beamsplitter(const GaussianState& state, std::size_t mode_i, std::size_t mode_j,
                           double transmittance) {
  check_mode(state, mode_i);
  check_mode(state, mode_j);
  if (mode_i == mode_j) {
    throw std::invalid_argument("beamsplitter needs two distinct modes");
  }
  check_unit_interval(transmittance, "beamsplitter transmittance");
  const double c = std::sqrt(transmittance);
  const double s = std::sqrt(1.0 - transmittance);
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  b.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  b.block<2, 2>(0, 2) = s * Eigen::Matrix2d::Identity();
  b.block<2, 2>(2, 0) = -s * Eigen::Matrix2d::Identity();
  b.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  const std::size_t modes[] = {mode_i, mode_j};
  return apply_local_symplectic(state, modes, b);
}

GaussianState loss(const GaussianState& state, std::size_t mode, double eta) {
  check_mode(state, mode);
  check_unit_interval(eta, "loss transmittance");
  const double amp = std::sqrt(eta);
  const auto k = static_cast<Eigen::Index>(2 * mode);
  Eigen::VectorXd m = state.mean();
  Eigen::MatrixXd c = state.cov();
  m.segment<2>(k) *= amp;
  c.middleRows<2>(k) *= amp;
  c.middleCols<2>(k) *= amp;
  c.block<2, 2>(k, k) += (1.0 - eta) * kVacuumVariance * Eigen::Matrix2d::Identity();
  return make_trusted(std::move(m), std::move(c));
}

GaussianState impure_squeezed_vacuum(DbValue squeezing, DbValue antisqueezing) {
  if (squeezing.db > 0.0 || antisqueezing.db < 0.0) {
    throw PhysicsError("squeezing must be <= 0 dB and anti-squeezing >= 0 dB");
  }
  const double vx = kVacuumVariance * squeezing.ratio();
  const double vp = kVacuumVariance * antisqueezing.ratio();
  if (vx * vp < kVacuumVariance * kVacuumVariance * (1.0 - 1e-12)) {
    throw PhysicsError("squeezing/anti-squeezing pair violates the uncertainty principle");
  }
  Eigen::MatrixXd c = Eigen::Vector2d(vx, vp).asDiagonal();
  return make_trusted(Eigen::VectorXd::Zero(2), std::move(c));
}

double marginal_variance(const GaussianState& state, const QuadratureAxis& axis) {
  const Eigen::VectorXd d = axis_vector(state, axis);
  return d.dot(state.cov() * d);
}

double marginal_mean(const GaussianState& state, const QuadratureAxis& axis) {
  return axis_vector(state, axis).dot(state.mean());
}

GaussianState homodyne_condition(const GaussianState& state, const QuadratureAxis& axis,
                                 double outcome) {
  if (state.n_modes() < 2) {
    throw std::invalid_argument("homodyne conditioning needs at least two modes");
  }
  const Eigen::VectorXd d = axis_vector(state, axis);
  const Eigen::VectorXd cross = state.cov() * d;
  const double measured = d.dot(cross);
  if (measured < kMinMeasuredVariance) {
    throw PhysicsError("measured quadrature variance is singular");
  }
  const Eigen::VectorXd m = state.mean() + cross * ((outcome - d.dot(state.mean())) / measured);
  const Eigen::MatrixXd c = state.cov() - cross * cross.transpose() / measured;

  std::vector<std::size_t> keep;
  keep.reserve(state.n_modes() - 1);
  for (std::size_t i = 0; i < state.n_modes(); ++i) {
    if (i != axis.mode) keep.push_back(i);
  }
  return make_trusted(m, symmetrized(c)).reduced(keep);
}

HomodyneSample sample_homodyne(const GaussianState& state, const QuadratureAxis& axis, Rng& rng) {
  const double outcome =
      rng.normal(marginal_mean(state, axis), std::sqrt(marginal_variance(state, axis)));
  return {outcome, homodyne_condition(state, axis, outcome)};
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const Eigen::Index dim = cov.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(cov));
  const Eigen::VectorXd evals = solver.eigenvalues();
  if (evals.minCoeff() <= 0.0) {
    // Not positive definite; no symplectic spectrum, report as unphysical.
    return std::vector<double>(static_cast<std::size_t>(dim / 2), evals.minCoeff());
  }
  const Eigen::MatrixXd root =
      solver.eigenvectors() * evals.cwiseSqrt().asDiagonal() * solver.eigenvectors().transpose();
  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = std::complex<double>(0.0, 1.0);
    omega(k + 1, k) = std::complex<double>(0.0, -1.0);
  }
  const Eigen::MatrixXcd h = root.cast<std::complex<double>>() * omega * root;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(0.5 * (h + h.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  // Spectrum is +-nu; the upper half, ascending.
  std::vector<double> nu;
  for (Eigen::Index k = dim / 2; k < dim; ++k) nu.push_back(hs.eigenvalues()(k));
  return nu;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.cov());
}

double passive_energy(const GaussianState& state) {
  return state.cov().trace() - 0.5 * static_cast<double>(state.n_modes()) +
         state.mean().squaredNorm();
}

}  // namespace cvtele
