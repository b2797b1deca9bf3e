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

#include "cvtele/teleporter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "cvtele/errors.hpp"

namespace cvtele {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void check_efficiency(double eta, const char* what, bool allow_zero = true) {
  const bool ok = allow_zero ? (eta >= 0.0 && eta <= 1.0) : (eta > 0.0 && eta <= 1.0);
  if (!ok) {
    throw PhysicsError(std::string(what) + " must lie in " + (allow_zero ? "[0, 1]" : "(0, 1]"));
  }
}

// Three-mode (u-port, v-port, B) state just after Alice's detector losses.
GaussianState detected_network(const GaussianState& input_and_epr, double eta_hom) {
  // Mode 1 becomes (in + A)/sqrt2, mode 0 becomes (in - A)/sqrt2.
  GaussianState s = beamsplitter(input_and_epr, 1, 0, 0.5);
  s = loss(s, 0, eta_hom);
  return loss(s, 1, eta_hom);
}

double feed_forward_scale(double gain, double eta_hom) {
  return gain * std::numbers::sqrt2 / std::sqrt(eta_hom);
}

GaussianState analytic_output(const TeleporterParams& params) {
  const GaussianState network = detected_network(params.input.tensor(make_epr(params)),
                                                 params.eta_hom);
  // x_out = x_B + k_x x_u,  p_out = p_B + k_p p_v.
  Eigen::MatrixXd readout = Eigen::MatrixXd::Zero(2, 6);
  readout(0, 4) = 1.0;
  readout(0, 0) = feed_forward_scale(params.g_x, params.eta_hom);
  readout(1, 5) = 1.0;
  readout(1, 3) = feed_forward_scale(params.g_p, params.eta_hom);
  Eigen::MatrixXd cov = readout * network.cov() * readout.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return GaussianState(readout * network.mean(), std::move(cov));
}

void require_single_mode_input(const TeleporterParams& params) {
  if (params.input.n_modes() != 1) {
    throw std::invalid_argument("teleporter input must be a single-mode state");
  }
}

TeleportReport make_report(const TeleporterParams& params, GaussianState output) {
  TeleportReport report;
  const GaussianState verified = loss(output, 0, params.eta_verify);
  report.vx_out = verified.cov()(0, 0);
  report.vp_out = verified.cov()(1, 1);
  report.vx_db = db_from_variance(report.vx_out);
  report.vp_db = db_from_variance(report.vp_out);
  const Eigen::Matrix2d vacuum_cov = kVacuumVariance * Eigen::Matrix2d::Identity();
  const bool coherent_input = (params.input.cov() - vacuum_cov).cwiseAbs().maxCoeff() <= 1e-12;
  if (params.unity_gain() && coherent_input) {
    report.fidelity_coherent = coherent_fidelity(report.vx_out, report.vp_out);
  }
  report.delta_sq_out = delta_sq(sidebands_from_single_mode(verified));

  const GaussianState seen_input = loss(params.input, 0, params.eta_hom);
  report.input_vx_db = db_from_variance(seen_input.cov()(0, 0));
  report.input_vp_db = db_from_variance(seen_input.cov()(1, 1));
  report.delta_sq_in = delta_sq(sidebands_from_single_mode(seen_input));

  const EprCorrelations corr = epr_correlations(make_epr(params));
  report.epr_x_db = corr.x_db();
  report.epr_p_db = corr.p_db();
  report.output_state = std::move(output);
  return report;
}

// Running mean and scatter (Welford), mergeable across chunks.
struct MomentAccumulator {
  double count = 0.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();

  void add(const Eigen::Vector2d& x) {
    count += 1.0;
    const Eigen::Vector2d delta = x - mean;
    mean += delta / count;
    scatter += delta * (x - mean).transpose();
  }

  void merge(const MomentAccumulator& other) {
    if (other.count == 0.0) return;
    const double total = count + other.count;
    const Eigen::Vector2d delta = other.mean - mean;
    mean += delta * (other.count / total);
    scatter += other.scatter + delta * delta.transpose() * (count * other.count / total);
    count = total;
  }
};

}  // namespace

void TeleporterParams::validate() const {
  for (std::size_t i = 0; i < 2; ++i) {
    // Throws for sign or uncertainty violations.
    (void)impure_squeezed_vacuum({epr_sq_db[i]}, {epr_antisq_db[i]});
    check_efficiency(eta_source[i], "source efficiency");
    check_efficiency(eta_prop[i], "propagation efficiency");
  }
  check_efficiency(eta_hom, "homodyne efficiency", false);
  check_efficiency(eta_verify, "verification efficiency");
  if (!std::isfinite(g_x) || !std::isfinite(g_p)) {
    throw PhysicsError("classical gains must be finite");
  }
  if (input.n_modes() != 1) {
    throw PhysicsError("teleporter input must be a single mode");
  }
}

bool TeleporterParams::unity_gain() const {
  return std::abs(g_x - 1.0) < 1e-12 && std::abs(g_p - 1.0) < 1e-12;
}

TeleporterParams pure_squeezer_params(double r, bool squeezed_input) {
  TeleporterParams params;
  const double sq_db = ratio_to_db(std::exp(-2.0 * r));
  params.epr_sq_db = {sq_db, sq_db};
  params.epr_antisq_db = {-sq_db, -sq_db};
  params.input = squeezed_input ? squeeze(vacuum(1), 0, r) : vacuum(1);
  return params;
}

double efficiency_from_visibility(double visibility) {
  if (!(visibility > 0.0 && visibility <= 1.0)) {
    throw PhysicsError("visibility must lie in (0, 1]");
  }
  return visibility * visibility;
}

GaussianState make_epr(const TeleporterParams& params) {
  const GaussianState x_squeezed =
      impure_squeezed_vacuum({params.epr_sq_db[0]}, {params.epr_antisq_db[0]});
  const GaussianState p_squeezed = rotate(
      impure_squeezed_vacuum({params.epr_sq_db[1]}, {params.epr_antisq_db[1]}), 0, kHalfPi);
  GaussianState s = loss(x_squeezed, 0, params.eta_source[0])
                        .tensor(loss(p_squeezed, 0, params.eta_source[1]));
  // Mode 0 -> A = (s0 + s1)/sqrt2, mode 1 -> B = (s1 - s0)/sqrt2.
  s = beamsplitter(s, 0, 1, 0.5);
  s = loss(s, 0, params.eta_prop[0]);
  return loss(s, 1, params.eta_prop[1]);
}

EprCorrelations epr_correlations(const GaussianState& epr) {
  if (epr.n_modes() != 2) {
    throw std::invalid_argument("EPR correlations need a two-mode state");
  }
  const Eigen::Vector4d x_diff(1.0, 0.0, -1.0, 0.0);
  const Eigen::Vector4d p_sum(0.0, 1.0, 0.0, 1.0);
  const Eigen::Matrix4d& c = epr.cov();
  return {x_diff.dot(c * x_diff), p_sum.dot(c * p_sum)};
}

BellOutcome bell_measure(const GaussianState& input_and_epr, Rng& rng, double eta_hom) {
  if (input_and_epr.n_modes() != 3) {
    throw std::invalid_argument("Bell measurement expects modes (input, A, B)");
  }
  check_efficiency(eta_hom, "homodyne efficiency", false);
  const GaussianState network = detected_network(input_and_epr, eta_hom);
  HomodyneSample first = sample_homodyne(network, {0, 0.0}, rng);
  HomodyneSample second = sample_homodyne(first.remaining, {0, kHalfPi}, rng);
  return {first.outcome, second.outcome, std::move(second.remaining)};
}

GaussianState feed_forward(const GaussianState& bob, double u, double v, double g_x, double g_p,
                           double eta_hom) {
  check_efficiency(eta_hom, "homodyne efficiency", false);
  return displace(bob, 0, feed_forward_scale(g_x, eta_hom) * u,
                  feed_forward_scale(g_p, eta_hom) * v);
}

TeleportReport teleport_analytic(const TeleporterParams& params) {
  params.validate();
  TeleportReport report = make_report(params, analytic_output(params));
  report.gains_measured = measure_gains(params, 1.0);
  return report;
}

McReport teleport_mc(const TeleporterParams& params, std::size_t shots) {
  params.validate();
  if (shots < 2) {
    throw std::invalid_argument("Monte Carlo needs at least two shots");
  }
  const GaussianState joint = params.input.tensor(make_epr(params));
  const std::size_t n_chunks = (shots + kShotChunk - 1) / kShotChunk;
  std::vector<MomentAccumulator> chunk_moments(n_chunks);
  Eigen::Matrix2d conditional_cov = Eigen::Matrix2d::Zero();

  auto run_chunk = [&](std::size_t chunk) {
    Rng rng(derive_seed(params.seed, chunk));
    const std::size_t begin = chunk * kShotChunk;
    const std::size_t end = std::min(shots, begin + kShotChunk);
    MomentAccumulator acc;
    for (std::size_t shot = begin; shot < end; ++shot) {
      const BellOutcome bell = bell_measure(joint, rng, params.eta_hom);
      const GaussianState out =
          feed_forward(bell.bob, bell.u, bell.v, params.g_x, params.g_p, params.eta_hom);
      acc.add(out.mode_mean(0));
      if (shot == 0) conditional_cov = out.mode_cov(0);
    }
    chunk_moments[chunk] = acc;
  };

  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, n_chunks);
  if (n_threads == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < n_threads; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t c = t; c < n_chunks; c += n_threads) run_chunk(c);
      });
    }
  }

  MomentAccumulator total;
  for (const auto& m : chunk_moments) total.merge(m);
  const double n = total.count;
  const Eigen::Matrix2d between = total.scatter / (n - 1.0);
  Eigen::Matrix2d cov = conditional_cov + between;
  cov = 0.5 * (cov + cov.transpose()).eval();

  McReport mc;
  mc.shots = shots;
  mc.shot_mean_cov = between;
  for (int i = 0; i < 2; ++i) {
    mc.mean_stderr(i) = std::sqrt(between(i, i) / n);
    for (int j = 0; j < 2; ++j) {
      mc.cov_stderr(i, j) =
          std::sqrt((between(i, i) * between(j, j) + between(i, j) * between(i, j)) / (n - 1.0));
    }
  }
  mc.report = make_report(params, GaussianState(Eigen::VectorXd(total.mean), Eigen::MatrixXd(cov)));
  return mc;
}

double coherent_fidelity(double vx_out, double vp_out) {
  if (!(vx_out > 0.0) || !(vp_out > 0.0)) {
    throw std::invalid_argument("fidelity needs positive output variances");
  }
  return 2.0 / std::sqrt((1.0 + 4.0 * vx_out) * (1.0 + 4.0 * vp_out));
}

std::array<double, 2> output_variances_pure(double r) {
  if (!(r >= 0.0)) {
    throw std::invalid_argument("squeezing parameter must be non-negative");
  }
  const double s = std::exp(-2.0 * r);
  return {0.75 * s, (std::exp(2.0 * r) + 2.0 * s) / 4.0};
}

DbValue squeezing_threshold_db() { return DbValue{ratio_to_db(1.0 / 3.0), kVacuumVariance}; }

std::vector<CascadeStage> cascade(const TeleporterParams& params, std::size_t n_stages) {
  if (n_stages == 0) {
    throw std::invalid_argument("cascade needs at least one stage");
  }
  require_single_mode_input(params);
  const Eigen::Matrix2d vacuum_cov = kVacuumVariance * Eigen::Matrix2d::Identity();
  if ((params.input.cov() - vacuum_cov).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("cascade expects a coherent input state");
  }
  std::vector<CascadeStage> stages;
  TeleporterParams stage_params = params;
  for (std::size_t k = 1; k <= n_stages; ++k) {
    stage_params.seed = derive_seed(params.seed, k);
    const TeleportReport report = teleport_analytic(stage_params);
    // Overlap with the original coherent state: at unity gain the mean is
    // carried through unchanged, so only the accumulated variances enter.
    std::optional<double> f;
    if (stage_params.unity_gain()) f = coherent_fidelity(report.vx_out, report.vp_out);
    stages.push_back({k, f, report.vx_out, report.vp_out});
    stage_params.input = report.output_state;
  }
  return stages;
}

std::array<double, 2> measure_gains(const TeleporterParams& params, double probe_amplitude) {
  if (probe_amplitude == 0.0 || !std::isfinite(probe_amplitude)) {
    throw std::invalid_argument("gain probe amplitude must be finite and nonzero");
  }
  params.validate();
  const Eigen::VectorXd base = analytic_output(params).mean();
  TeleporterParams probe_x = params;
  probe_x.input = displace(params.input, 0, probe_amplitude, 0.0);
  TeleporterParams probe_p = params;
  probe_p.input = displace(params.input, 0, 0.0, probe_amplitude);
  return {(analytic_output(probe_x).mean()(0) - base(0)) / probe_amplitude,
          (analytic_output(probe_p).mean()(1) - base(1)) / probe_amplitude};
}

GaussianState undo_detection_loss(const GaussianState& measured, double eta) {
  check_efficiency(eta, "detector efficiency", false);
  const auto dim = measured.mean().size();
  Eigen::MatrixXd cov =
      (measured.cov() - (1.0 - eta) * kVacuumVariance * Eigen::MatrixXd::Identity(dim, dim)) / eta;
  return GaussianState(measured.mean() / std::sqrt(eta), std::move(cov));
}

}  // namespace cvtele
