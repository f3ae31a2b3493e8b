// Copyright 2026 The distest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DISTEST_TRANSFORMS_HPP_
#define DISTEST_TRANSFORMS_HPP_

#include <cstdint>
#include <vector>

#include "distest/models.hpp"

namespace distest {

// Square-root statistic of relative counts: values_i = sqrt((N_i + c)/n).
// Approximately Normal(sqrt(q_i), 1/(4n)) per coordinate under q in F.
struct RootStat {
  std::vector<double> values;
  std::int64_t n = 0;
  std::size_t d() const { return values.size(); }
};

// Quarter-count shift stabilizing sqrt(0) at small counts; calibration
// under the null absorbs the residual bias.
inline constexpr double kDefaultCountShift = 0.25;

CountVector counts_from_raw(const std::vector<std::int32_t>& raw,
                            std::size_t d);

RootStat root_transform(const CountVector& counts,
                        double c_shift = kDefaultCountShift);

// Subtracts sqrt(q0) coordinatewise.
std::vector<double> center_at_null(const std::vector<double>& stat,
                                   const SimplexVector& q0);

// S_i = a_i * x_i - a_{d/2+i} * x_{d/2+i} for i in [d/2]; d even.
std::vector<double> left_right_reduce(const std::vector<double>& x,
                                      const std::vector<double>& a);

// Checks that the multinomial likelihood ratio dQ_q/dQ_q0, evaluated on
// two raw samples with identical counts, agrees: the ratio factors
// through the count statistic.
bool neyman_fisher_check(const std::vector<std::int32_t>& raw_a,
                         const std::vector<std::int32_t>& raw_b,
                         const SimplexVector& q, const SimplexVector& q0,
                         double tol = 1e-10);

// Log of dQ_q/dQ_q0 evaluated on a raw sample, via the product form.
double raw_log_likelihood_ratio(const std::vector<std::int32_t>& raw,
                                const SimplexVector& q,
                                const SimplexVector& q0);

}  // namespace distest

#endif  // DISTEST_TRANSFORMS_HPP_
