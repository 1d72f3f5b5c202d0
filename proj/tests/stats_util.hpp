// Copyright 2026 The tsyn developers
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

// Shared statistics helpers for tests.

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace test_stats {

/// Upper critical value of chi-square with `dof` degrees of freedom via the
/// Wilson-Hilferty cube approximation. z is the standard normal quantile of
/// the same upper tail (2.3263... for alpha = 0.01).
inline double chi2_critical(double dof, double z) {
  const double a = 2.0 / (9.0 * dof);
  const double c = 1.0 - a + z * std::sqrt(a);
  return dof * c * c * c;
}

inline constexpr double kZ99 = 2.3263478740408408;  // alpha = 0.01

struct Chi2Result {
  double stat = 0.0;
  double dof = 0.0;
  double critical99 = 0.0;
  bool pass = false;
};

/// Pearson chi-square of observed counts against probabilities, pooling
/// cells with expected count below 5 into one remainder cell.
inline Chi2Result chi2_test(const std::vector<std::uint64_t>& observed,
                            const std::vector<double>& prob,
                            std::uint64_t total) {
  double stat = 0.0;
  std::size_t cells = 0;
  double pooled_exp = 0.0;
  std::uint64_t pooled_obs = 0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double expect = prob[i] * static_cast<double>(total);
    if (expect < 5.0) {
      pooled_exp += expect;
      pooled_obs += observed[i];
      continue;
    }
    const double d = static_cast<double>(observed[i]) - expect;
    stat += d * d / expect;
    ++cells;
  }
  if (pooled_exp > 0.0) {
    const double d = static_cast<double>(pooled_obs) - pooled_exp;
    stat += d * d / pooled_exp;
    ++cells;
  }
  Chi2Result r;
  r.stat = stat;
  r.dof = static_cast<double>(cells > 1 ? cells - 1 : 1);
  r.critical99 = chi2_critical(r.dof, kZ99);
  r.pass = stat < r.critical99;
  return r;
}

}  // namespace test_stats
