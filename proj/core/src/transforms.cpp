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

#include "distest/transforms.hpp"

#include <cmath>

namespace distest {

CountVector counts_from_raw(const std::vector<std::int32_t>& raw,
                            std::size_t d) {
  std::vector<std::int64_t> counts(d, 0);
  for (std::int32_t label : raw) {
    if (label < 0 || static_cast<std::size_t>(label) >= d)
      throw ValidationError("counts_from_raw: label out of range");
    ++counts[static_cast<std::size_t>(label)];
  }
  return CountVector(std::move(counts), static_cast<std::int64_t>(raw.size()));
}

RootStat root_transform(const CountVector& counts, double c_shift) {
  if (counts.n <= 0)
    throw ValidationError("root_transform: requires n >= 1");
  RootStat stat;
  stat.n = counts.n;
  stat.values.resize(counts.d());
  const double nd = static_cast<double>(counts.n);
  for (std::size_t i = 0; i < counts.d(); ++i) {
    stat.values[i] =
        std::sqrt((static_cast<double>(counts.counts[i]) + c_shift) / nd);
  }
  return stat;
}

std::vector<double> center_at_null(const std::vector<double>& stat,
                                   const SimplexVector& q0) {
  if (stat.size() != q0.d())
    throw ValidationError("center_at_null: dimension mismatch");
  std::vector<double> out(stat.size());
  for (std::size_t i = 0; i < stat.size(); ++i)
    out[i] = stat[i] - std::sqrt(q0[i]);
  return out;
}

std::vector<double> left_right_reduce(const std::vector<double>& x,
                                      const std::vector<double>& a) {
  const std::size_t d = x.size();
  if (d == 0 || d % 2 != 0)
    throw ValidationError("left_right_reduce: d must be even and positive");
  if (a.size() != d)
    throw ValidationError("left_right_reduce: weight dimension mismatch");
  std::vector<double> s(d / 2);
  for (std::size_t i = 0; i < d / 2; ++i)
    s[i] = a[i] * x[i] - a[d / 2 + i] * x[d / 2 + i];
  return s;
}

double raw_log_likelihood_ratio(const std::vector<std::int32_t>& raw,
                                const SimplexVector& q,
                                const SimplexVector& q0) {
  if (q.d() != q0.d())
    throw ValidationError("log_likelihood_ratio: dimension mismatch");
  double s = 0.0;
  for (std::int32_t label : raw) {
    if (label < 0 || static_cast<std::size_t>(label) >= q.d())
      throw ValidationError("log_likelihood_ratio: label out of range");
    s += std::log(q[static_cast<std::size_t>(label)]) -
         std::log(q0[static_cast<std::size_t>(label)]);
  }
  return s;
}

bool neyman_fisher_check(const std::vector<std::int32_t>& raw_a,
                         const std::vector<std::int32_t>& raw_b,
                         const SimplexVector& q, const SimplexVector& q0,
                         double tol) {
  const CountVector ca = counts_from_raw(raw_a, q.d());
  const CountVector cb = counts_from_raw(raw_b, q.d());
  if (ca.counts != cb.counts)
    throw ValidationError("neyman_fisher_check: samples have unequal counts");
  const double la = raw_log_likelihood_ratio(raw_a, q, q0);
  const double lb = raw_log_likelihood_ratio(raw_b, q, q0);
  return std::abs(la - lb) <= tol;
}

}  // namespace distest
