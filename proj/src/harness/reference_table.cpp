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

#include "cvtele/harness/reference_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cvtele/harness/config.hpp"
#include "cvtele/harness/run.hpp"
#include "cvtele/sideband.hpp"
#include "cvtele/teleporter.hpp"
#include "cvtele/tomography.hpp"

namespace cvtele::harness {

namespace {

ComparisonRow row(std::string quantity, std::optional<double> reference, double simulated,
                  double lo, double hi) {
  return {std::move(quantity), reference, simulated, lo, hi, simulated >= lo && simulated <= hi};
}

ComparisonRow around(std::string quantity, std::optional<double> reference, double simulated,
                     double centre, double tol) {
  return row(std::move(quantity), reference, simulated, centre - tol, centre + tol);
}

// Largest |empirical - analytic| / stderr over output mean and covariance.
double mc_sweep_max_sigma() {
  double worst = 0.0;
  std::uint64_t seed = 8100;
  for (double r : {0.0, 0.35, 0.69}) {
    for (double g : {0.5, 1.0}) {
      for (double eta : {0.9, 1.0}) {
        TeleporterParams p = pure_squeezer_params(r, false);
        p.input = coherent(1.0, -0.5);
        p.g_x = g;
        p.g_p = g;
        p.eta_prop = {eta, eta};
        p.eta_hom = eta;
        p.seed = ++seed;
        const TeleportReport a = teleport_analytic(p);
        const McReport m = teleport_mc(p, 100000);
        for (int i = 0; i < 2; ++i) {
          worst = std::max(worst, std::abs(m.report.output_state.mean()(i) - a.output_state.mean()(i)) /
                                      m.mean_stderr(i));
          for (int k = i; k < 2; ++k)
            worst = std::max(worst, std::abs(m.report.output_state.cov()(i, k) -
                                             a.output_state.cov()(i, k)) /
                                        m.cov_stderr(i, k));
        }
      }
    }
  }
  return worst;
}

}  // namespace

std::vector<ComparisonRow> reproduction_table() {
  std::vector<ComparisonRow> rows;

  const double threshold = squeezing_threshold_db().db;
  rows.push_back(around("squeezing threshold (dB)", -4.8, threshold, -4.771, 0.0005));
  {
    const TeleportReport at = teleport_analytic(pure_squeezer_params(0.5 * std::log(3.0), true));
    rows.push_back(around("Vx_out/vacuum at threshold", 1.0, at.vx_out / kVacuumVariance, 1.0, 1e-10));
  }

  const TeleporterParams classical = pure_squeezer_params(0.0, false);
  rows.push_back(around("fidelity, r = 0", 0.5, teleport_analytic(classical).fidelity_coherent.value(),
                        0.5, 1e-10));

  const TeleporterParams ideal = pure_squeezer_params(0.5 * std::log(std::pow(10.0, 0.6)), false);
  rows.push_back(
      around("fidelity, ideal -6 dB", 0.80, teleport_analytic(ideal).fidelity_coherent.value(),
             1.0 / (1.0 + std::pow(10.0, -0.6)), 0.0005));

  rows.push_back(around("fidelity from 2.0/2.3 dB variances", 0.76,
                        coherent_fidelity(0.25 * std::pow(10.0, 0.20), 0.25 * std::pow(10.0, 0.23)),
                        0.757, 0.005));

  const RunResult coh = run(preset_config(Scenario::coherent));
  rows.push_back(around("EPR x correlation (dB)", -5.6, coh.report.epr_x_db.db, -5.6, 0.05));
  rows.push_back(around("EPR p correlation (dB)", -5.5, coh.report.epr_p_db.db, -5.5, 0.05));
  rows.push_back(row("coherent Vx_out (dB)", 2.0, coh.report.vx_db.db, 1.8, 2.4));
  rows.push_back(row("coherent Vp_out (dB)", 2.3, coh.report.vp_db.db, 1.8, 2.4));
  rows.push_back(row("coherent fidelity", 0.76, coh.report.fidelity_coherent.value_or(0.0), 0.74, 0.79));

  RunOptions with_wigner;
  with_wigner.wigner = true;
  const ExperimentConfig sq_cfg = preset_config(Scenario::squeezed_x);
  const RunResult sq = run(sq_cfg, with_wigner);
  rows.push_back(row("squeezed Vx_out (dB)", -0.8, sq.report.vx_db.db, -1.2, -0.6));
  rows.push_back(row("squeezed Vp_out (dB)", 12.4, sq.report.vp_db.db, 11.9, 12.7));
  rows.push_back(row("delta_sq output", 0.83, sq.report.delta_sq_out.value, 0.76, 0.88));
  rows.push_back(around("delta_sq input", 0.24, sq.report.delta_sq_in.value, 0.240, 0.005));
  const bool entangled = is_entangled(sidebands_from_single_mode(sq.report.output_state)).entangled;
  rows.push_back(row("output sidebands entangled (1 = yes)", 1.0, entangled ? 1.0 : 0.0, 1.0, 1.0));

  {
    const PhaseScanTrace t = spectrum_trace(coherent(3.5, 0.0), 361, 30);
    double peak = -1e300;
    for (const auto& pt : t.points) peak = std::max(peak, pt.power_db);
    rows.push_back(around("signal peak, alpha = 3.5 (dB)", 17.0, peak, 17.0, 0.1));
  }

  rows.push_back(row("MC vs analytic, worst deviation (sigma)", std::nullopt, mc_sweep_max_sigma(), 0.0, 5.0));

  {
    const WignerMoments m = wigner_moments(*sq.output_wigner);
    const GaussianState seen = loss(sq.report.output_state, 0, sq_cfg.eta_verify);
    double rel = 0.0;
    for (int i = 0; i < 2; ++i) rel = std::max(rel, std::abs(m.cov(i, i) / seen.cov()(i, i) - 1.0));
    const double mean_err = (m.mean - seen.mean()).cwiseAbs().maxCoeff();
    rows.push_back(row("tomography variance error (relative)", std::nullopt, rel, 0.0, 0.05));
    rows.push_back(row("tomography mean error", std::nullopt, mean_err, 0.0, 0.05));
  }

  {
    int agree = 0;
    const double rs[] = {0.0, 0.2, 0.4, 0.55, 0.7, 0.9};
    for (double r : rs) {
      const TeleportReport rep = teleport_analytic(pure_squeezer_params(r, true));
      const bool ent = rep.delta_sq_out.value < 1.0;
      const bool squeezed = rep.vx_out < kVacuumVariance;
      agree += ent == squeezed ? 1 : 0;
    }
    rows.push_back(row("delta_sq < 1 iff Vx_out < vacuum (cases)", std::nullopt, agree, 6.0, 6.0));
  }

  {
    TeleporterParams p = ideal;
    p.input = coherent(1.0, 0.0);
    const auto stages = cascade(p, 4);
    const double expected[] = {0.799, 0.666, 0.570, 0.499};
    for (std::size_t n = 0; n < stages.size(); ++n) {
      rows.push_back(around("cascade fidelity, " + std::to_string(n + 1) + " stage(s)", std::nullopt,
                            stages[n].fidelity.value_or(0.0), expected[n], 0.002));
    }
  }
  return rows;
}

std::string format_table(const std::vector<ComparisonRow>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-42s %10s %12s %10s %22s  %s\n", "quantity", "reference",
                "simulated", "|delta|", "window", "result");
  out += buf;
  for (const auto& r : rows) {
    char ref[32] = "-";
    char delta[32] = "-";
    if (r.reference) {
      std::snprintf(ref, sizeof ref, "%.4g", *r.reference);
      std::snprintf(delta, sizeof delta, "%.3g", std::abs(r.simulated - *r.reference));
    }
    char window[64];
    std::snprintf(window, sizeof window, "[%.6g, %.6g]", r.lo, r.hi);
    std::snprintf(buf, sizeof buf, "%-42s %10s %12.6g %10s %22s  %s\n", r.quantity.c_str(), ref,
                  r.simulated, delta, window, r.pass ? "PASS" : "FAIL");
    out += buf;
  }
  return out;
}

}  // namespace cvtele::harness
