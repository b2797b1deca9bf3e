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

#include "cvtele/harness/calibrate.hpp"

#include <cmath>
#include <sstream>

#include "cvtele/errors.hpp"

namespace cvtele::harness {

namespace {

constexpr double kEtaFloor = 1e-12;
constexpr double kReportTolDb = 0.05;

double correlation_db(const TeleporterParams& p, int which) {
  const EprCorrelations c = epr_correlations(make_epr(p));
  return which == 0 ? c.x_db().db : c.p_db().db;
}

// Correlation in dB falls monotonically as the source efficiency grows.
double solve_one(TeleporterParams p, int which, double target) {
  const char* label = which == 0 ? "x" : "p";
  p.eta_source[which] = 1.0;
  const double best = correlation_db(p, which);
  p.eta_source[which] = kEtaFloor;
  const double worst = correlation_db(p, which);
  if (target < best - 1e-12 || target > worst + 1e-12) {
    std::ostringstream msg;
    msg << "EPR " << label << " target " << target << " dB is unreachable; the sources allow ["
        << best << ", " << worst << "] dB";
    throw PhysicsError(msg.str());
  }
  if (target <= best) return 1.0;
  double lo = kEtaFloor;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    p.eta_source[which] = mid;
    const double v = correlation_db(p, which);
    if (v > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CalibrationResult calibrate_losses(const CalibrationTarget& target) {
  if (!std::isfinite(target.epr_x_db) || !std::isfinite(target.epr_p_db))
    throw PhysicsError("calibration targets must be finite");
  TeleporterParams p = target.base;
  p.eta_source = {1.0, 1.0};
  p.validate();

  CalibrationResult result;
  for (int round = 0; round < 100; ++round) {
    const double ex = solve_one(p, 0, target.epr_x_db);
    p.eta_source[0] = ex;
    const double ep = solve_one(p, 1, target.epr_p_db);
    const double change = std::abs(ep - p.eta_source[1]) + std::abs(ex - result.eta_source[0]);
    p.eta_source[1] = ep;
    result.eta_source = p.eta_source;
    if (change < 1e-13) break;
  }

  const EprCorrelations c = epr_correlations(make_epr(p));
  result.achieved_db = {c.x_db().db, c.p_db().db};
  result.residual_db = {result.achieved_db[0] - target.epr_x_db,
                        result.achieved_db[1] - target.epr_p_db};
  if (std::abs(result.residual_db[0]) > kReportTolDb || std::abs(result.residual_db[1]) > kReportTolDb)
    throw PhysicsError("calibration did not converge to the EPR targets");

  if (target.input_db) {
    const GaussianState measured = impure_squeezed_vacuum(
        DbValue{(*target.input_db)[0]}, DbValue{(*target.input_db)[1]});
    result.inferred_input = undo_detection_loss(measured, p.eta_hom);
  }
  return result;
}

}  // namespace cvtele::harness
