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

namespace cvtele {

/// Vacuum quadrature variance with hbar = 1/2.
inline constexpr double kVacuumVariance = 0.25;
/// Vacuum variance of a two-mode combination such as x_A - x_B.
inline constexpr double kTwoModeVacuumVariance = 0.5;

/// A level in decibels relative to an explicit reference variance.
struct DbValue {
  double db = 0.0;
  double reference = kVacuumVariance;

  double ratio() const;
  double variance() const { return ratio() * reference; }

  friend bool operator==(const DbValue&, const DbValue&) = default;
};

DbValue db_from_variance(double variance, double reference = kVacuumVariance);
double variance_from_db(DbValue value);

double ratio_to_db(double ratio);
double db_to_ratio(double db);

}  // namespace cvtele
