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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cvtele/errors.hpp"
#include "cvtele/teleporter.hpp"
#include "cvtele/tomography.hpp"

using namespace cvtele;

namespace {

constexpr double kPi = std::numbers::pi;

GaussianState input_squeezed() { return impure_squeezed_vacuum({-6.2}, {12.0}); }

// Teleported squeezed state for the calibrated loss budget.
GaussianState teleported_squeezed() {
  TeleporterParams p;
  p.eta_source = {0.9676364054027777, 0.9590689301181816};
  p.eta_hom = 0.98 * 0.98;
  p.input = undo_detection_loss(input_squeezed(), p.eta_hom);
  return teleport_analytic(p).output_state;
}

WignerMoments reconstruct_moments(const GaussianState& s, std::uint64_t seed, std::size_t n = 100000) {
  Rng rng(seed);
  const QuadratureRecord rec = sample_record(s, n, PhaseSchedule{}, rng);
  return wigner_moments(inverse_radon(rec, grid_for_record(rec)));
}

}  // namespace

// ---- spectrum_trace ---------------------------------------------------------

TEST(SpectrumTrace, VacuumIsFlatZeroDb) {
  const PhaseScanTrace t = spectrum_trace(vacuum(1), 90, 30);
  ASSERT_EQ(t.points.size(), 90u);
  EXPECT_EQ(t.averages, 30u);
  for (const auto& pt : t.points) EXPECT_NEAR(pt.power_db, 0.0, 1e-12);
}

TEST(SpectrumTrace, CoherentSignalLevel) {
  const PhaseScanTrace t = spectrum_trace(coherent(3.5, 0.0), 360, 30);
  EXPECT_DOUBLE_EQ(t.points[0].theta, 0.0);
  EXPECT_NEAR(t.points[0].power_db, 10 * std::log10(1 + 4 * 3.5 * 3.5), 1e-12);
  EXPECT_NEAR(t.points[0].power_db, 17.0, 0.1);
}

TEST(SpectrumTrace, SqueezedOscillatesWithPeriodPi) {
  const PhaseScanTrace t = spectrum_trace(input_squeezed(), 400, 30);
  double lo = 1e9, hi = -1e9;
  for (const auto& pt : t.points) {
    lo = std::min(lo, pt.power_db);
    hi = std::max(hi, pt.power_db);
  }
  EXPECT_NEAR(lo, -6.2, 1e-9);
  EXPECT_NEAR(hi, 12.0, 1e-9);
  // 400 points over 2 pi: index k and k + 200 are pi apart.
  for (std::size_t k = 0; k < 200; ++k)
    EXPECT_NEAR(t.points[k].power_db, t.points[k + 200].power_db, 1e-9);
}

TEST(SpectrumTrace, SignalTermIsPiPeriodicToo) {
  const PhaseScanTrace t = spectrum_trace(displace(input_squeezed(), 0, 1.0, 2.0), 100, 30);
  for (std::size_t k = 0; k < 50; ++k) EXPECT_NEAR(t.points[k].power_db, t.points[k + 50].power_db, 1e-9);
}

TEST(SpectrumTrace, AveragingNoiseIsUnbiasedAndPiPeriodicInMean) {
  Rng rng(17);
  const std::size_t n = 4000;
  const PhaseScanTrace noisy = spectrum_trace(input_squeezed(), n, 30, rng);
  const PhaseScanTrace clean = spectrum_trace(input_squeezed(), n, 30);
  double sum_ratio = 0.0, sum_sq = 0.0, half_diff = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double ratio = std::pow(10.0, (noisy.points[k].power_db - clean.points[k].power_db) / 10.0);
    sum_ratio += ratio;
    sum_sq += ratio * ratio;
  }
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double a = std::pow(10.0, (noisy.points[k].power_db - clean.points[k].power_db) / 10.0);
    const double b = std::pow(10.0, (noisy.points[k + n / 2].power_db - clean.points[k + n / 2].power_db) / 10.0);
    half_diff += a - b;
  }
  const double mean = sum_ratio / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_NEAR(mean, 1.0, 5 * std::sqrt(1.0 / 30 / n));
  EXPECT_NEAR(var, 1.0 / 30, 0.2 / 30);
  // Difference of the two half-period copies averages to zero.
  EXPECT_NEAR(half_diff / (n / 2), 0.0, 5 * std::sqrt(2.0 / 30 / (n / 2)));
}

// ---- sample_record ------------------------------------------------------------

TEST(SampleRecord, LinearScheduleOverHalfTurn) {
  Rng rng(1);
  const QuadratureRecord rec = sample_record(vacuum(1), 1000, PhaseSchedule{}, rng);
  ASSERT_EQ(rec.samples.size(), 1000u);
  EXPECT_DOUBLE_EQ(rec.samples[0].theta, 0.0);
  EXPECT_NEAR(rec.samples[500].theta, kPi / 2, 1e-15);
  EXPECT_LT(rec.samples.back().theta, kPi);
}

TEST(SampleRecord, VacuumPerBinVariance) {
  Rng rng(2);
  const QuadratureRecord rec = sample_record(vacuum(1), 100000, PhaseSchedule{}, rng);
  const std::size_t bins = 4, per = rec.samples.size() / bins;
  for (std::size_t b = 0; b < bins; ++b) {
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = b * per; i < (b + 1) * per; ++i) {
      s1 += rec.samples[i].value;
      s2 += rec.samples[i].value * rec.samples[i].value;
    }
    const double var = s2 / per - (s1 / per) * (s1 / per);
    EXPECT_NEAR(var, 0.25, 0.03 * 0.25) << "bin " << b;
  }
}

TEST(SampleRecord, SqueezedVarianceNearXAxis) {
  const GaussianState s = squeeze(vacuum(1), 0, 0.5 * std::log(std::pow(10.0, 0.6)));
  Rng rng(3);
  const QuadratureRecord rec = sample_record(s, 100000, PhaseSchedule{}, rng);
  double s2 = 0.0, expect = 0.0;
  std::size_t n = 0;
  for (const auto& q : rec.samples) {
    if (q.theta > 0.01) break;
    s2 += q.value * q.value;
    expect += marginal_variance(s, {0, q.theta});
    ++n;
  }
  ASSERT_GT(n, 200u);
  EXPECT_NEAR(expect / n, 0.0628, 0.002);
  EXPECT_NEAR(s2 / n, expect / n, 5 * (expect / n) * std::sqrt(2.0 / n));
}

TEST(SampleRecord, CoherentMeanNearXAxis) {
  Rng rng(4);
  const QuadratureRecord rec = sample_record(coherent(3.5, 0.0), 100000, PhaseSchedule{}, rng);
  double s1 = 0.0;
  std::size_t n = 0;
  for (const auto& q : rec.samples) {
    if (q.theta > 0.02) break;
    s1 += q.value;
    ++n;
  }
  EXPECT_NEAR(s1 / n, 3.5, 5 * 0.5 / std::sqrt(n));
}

TEST(SampleRecord, SeedDeterminism) {
  Rng a(8), b(8);
  const auto ra = sample_record(input_squeezed(), 5000, PhaseSchedule{}, a);
  const auto rb = sample_record(input_squeezed(), 5000, PhaseSchedule{}, b);
  for (std::size_t i = 0; i < ra.samples.size(); ++i) ASSERT_EQ(ra.samples[i].value, rb.samples[i].value);
}

// ---- grids / analytic Wigner -------------------------------------------------

TEST(GridSpec, GeometryAndValidation) {
  GridSpec g;
  EXPECT_NEAR(g.dx(), 6.0 / 80, 1e-15);
  EXPECT_NEAR(g.x(0), -3.0, 1e-15);
  EXPECT_NEAR(g.x(80), 3.0, 1e-15);
  g.n_x = 1;
  EXPECT_ANY_THROW(g.validate());
  g = GridSpec{};
  g.p_max = g.p_min;
  EXPECT_ANY_THROW(g.validate());
}

TEST(WignerAnalytic, VacuumPeak) {
  const WignerGrid w = wigner_analytic(vacuum(1), GridSpec{});
  EXPECT_NEAR(w.at(40, 40), 2.0 / kPi, 1e-12);
  EXPECT_NEAR(w.integral(), 1.0, 0.01);
}

TEST(WignerAnalytic, CoherentPeakMoves) {
  const GaussianState s = coherent(3.5, 0.0);
  const GridSpec g = grid_for_state(s, 81, 81);
  const WignerGrid w = wigner_analytic(s, g);
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < g.n_x; ++i)
    for (std::size_t j = 0; j < g.n_p; ++j)
      if (w.at(i, j) > w.at(bi, bj)) {
        bi = i;
        bj = j;
      }
  EXPECT_NEAR(g.x(bi), 3.5, g.dx());
  EXPECT_NEAR(g.p(bj), 0.0, g.dp());
  EXPECT_LE(w.at(bi, bj), 2.0 / kPi + 1e-12);
  EXPECT_NEAR(w.at(bi, bj), 2.0 / kPi, 0.05);
}

TEST(WignerAnalytic, SqueezedAxisRatio) {
  const GaussianState s = input_squeezed();
  const WignerMoments m = wigner_moments(wigner_analytic(s, grid_for_state(s, 121, 121)));
  EXPECT_NEAR(10 * std::log10(m.cov(1, 1) / m.cov(0, 0)), 18.2, 0.05);
}

TEST(WignerAnalytic, PositiveForProducedStates) {
  for (const GaussianState& s : {vacuum(1), coherent(3.5, 0.0), input_squeezed(), teleported_squeezed()}) {
    const WignerGrid w = wigner_analytic(s, grid_for_state(s, 61, 61));
    for (double v : w.values) EXPECT_GT(v, 0.0);
    EXPECT_NEAR(w.integral(), 1.0, 0.05);
  }
}

TEST(WignerMoments, VacuumAndDisplaced) {
  const WignerMoments v = wigner_moments(wigner_analytic(vacuum(1), GridSpec{}));
  EXPECT_NEAR(v.mean.norm(), 0.0, 1e-10);
  EXPECT_NEAR(v.cov(0, 0), 0.25, 0.002);
  EXPECT_NEAR(v.cov(1, 1), 0.25, 0.002);
  EXPECT_NEAR(v.cov(0, 1), 0.0, 1e-10);
  const GaussianState c = coherent(3.5, 0.0);
  const WignerMoments d = wigner_moments(wigner_analytic(c, grid_for_state(c)));
  EXPECT_NEAR(d.mean(0), 3.5, 1e-6);
  EXPECT_NEAR(d.mean(1), 0.0, 1e-6);
}

TEST(WignerMoments, TeleportedSqueezedMatchesReport) {
  const GaussianState s = teleported_squeezed();
  const WignerMoments m = wigner_moments(wigner_analytic(s, grid_for_state(s, 101, 101)));
  EXPECT_NEAR(m.cov(0, 0), s.cov()(0, 0), 0.01 * s.cov()(0, 0));
}

TEST(WignerMoments, ZeroGridIsAnError) {
  WignerGrid g;
  g.values.assign(g.spec.n_x * g.spec.n_p, 0.0);
  EXPECT_THROW(wigner_moments(g), PhysicsError);
}

// ---- inverse Radon -----------------------------------------------------------

TEST(InverseRadon, VacuumSecondMoments) {
  const WignerMoments m = reconstruct_moments(vacuum(1), 101);
  EXPECT_NEAR(m.cov(0, 0), 0.25, 0.05 * 0.25);
  EXPECT_NEAR(m.cov(1, 1), 0.25, 0.05 * 0.25);
  EXPECT_NEAR(m.cov(0, 1), 0.0, 0.05 * 0.25);
}

TEST(InverseRadon, SqueezedVarianceRatio) {
  const WignerMoments m = reconstruct_moments(input_squeezed(), 102);
  const double ratio = m.cov(1, 1) / m.cov(0, 0);
  EXPECT_NEAR(ratio, std::pow(10.0, 1.82), 0.1 * std::pow(10.0, 1.82));
}

TEST(InverseRadon, ConsistencyForProducedStates) {
  const GaussianState states[] = {vacuum(1), coherent(3.5, 0.0), input_squeezed(), teleported_squeezed()};
  std::uint64_t seed = 200;
  for (const GaussianState& s : states) {
    const WignerMoments m = reconstruct_moments(s, ++seed);
    for (int i = 0; i < 2; ++i) {
      EXPECT_NEAR(m.cov(i, i), s.cov()(i, i), 0.05 * s.cov()(i, i)) << "seed " << seed;
      EXPECT_NEAR(m.mean(i), s.mean()(i), 0.05) << "seed " << seed;
    }
  }
}

TEST(InverseRadon, NormalizedWhenStateFitsWindow) {
  for (const GaussianState& s : {vacuum(1), input_squeezed()}) {
    Rng rng(303);
    const QuadratureRecord rec = sample_record(s, 100000, PhaseSchedule{}, rng);
    const WignerGrid w = inverse_radon(rec, grid_for_state(s));
    EXPECT_NEAR(w.integral(), 1.0, 0.05);
  }
}

TEST(InverseRadon, RequiresHalfTurnCoverage) {
  Rng rng(5);
  const QuadratureRecord rec = sample_record(vacuum(1), 20000, PhaseSchedule{0.0, kPi / 2}, rng);
  try {
    inverse_radon(rec, GridSpec{});
    FAIL() << "expected a coverage error";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("coverage"), std::string::npos);
  }
}

TEST(InverseRadon, FullTurnRecordIsAccepted) {
  Rng rng(6);
  const QuadratureRecord rec = sample_record(vacuum(1), 100000, PhaseSchedule{0.0, 2 * kPi}, rng);
  const WignerMoments m = wigner_moments(inverse_radon(rec, GridSpec{}));
  EXPECT_NEAR(m.cov(0, 0), 0.25, 0.05 * 0.25);
}

TEST(InverseRadon, RejectsTinyRecordsAndBadOptions) {
  Rng rng(7);
  const QuadratureRecord small = sample_record(vacuum(1), 500, PhaseSchedule{}, rng);
  EXPECT_THROW(inverse_radon(small, GridSpec{}), std::invalid_argument);
  const QuadratureRecord rec = sample_record(vacuum(1), 5000, PhaseSchedule{}, rng);
  RadonOptions bad;
  bad.filter_cutoff = 0.0;
  EXPECT_THROW(inverse_radon(rec, GridSpec{}, bad), std::invalid_argument);
}

TEST(InverseRadon, DeterministicForFixedRecord) {
  Rng a(9), b(9);
  const auto ra = sample_record(input_squeezed(), 20000, PhaseSchedule{}, a);
  const auto rb = sample_record(input_squeezed(), 20000, PhaseSchedule{}, b);
  EXPECT_EQ(inverse_radon(ra, GridSpec{}).values, inverse_radon(rb, GridSpec{}).values);
}
