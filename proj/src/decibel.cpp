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

#include "cvtele/decibel.hpp"

#include <cmath>
#include <stdexcept>

namespace cvtele {

double ratio_to_db(double ratio) {
  if (!(ratio > 0.0)) {
    throw std::invalid_argument("decibel conversion needs a positive ratio");
  }
  return 10.0 * std::log10(ratio);
}

double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

double DbValue::ratio() const { return db_to_ratio(db); }

DbValue db_from_variance(double variance, double reference) {
  if (!(variance > 0.0) || !(reference > 0.0)) {
    throw std::invalid_argument("variance and reference must be positive");
  }
  return DbValue{ratio_to_db(variance / reference), reference};
}

double variance_from_db(DbValue value) {
  if (!(value.reference > 0.0)) {
    throw std::invalid_argument("reference variance must be positive");
  }
  return value.variance();
}

}  // namespace cvtele
