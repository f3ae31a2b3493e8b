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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "distest/rng.hpp"
#include "doctest.h"

namespace distest {
namespace {

TEST_CASE("mix_seed is deterministic and order sensitive") {
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
  CHECK(mix_seed(1, 2, 3) == mix_seed(mix_seed(1, 2), 3));
  // Distinct tuples land on distinct streams in a small exhaustive scan.
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 32; ++a) {
    for (std::uint64_t b = 0; b < 32; ++b) seen.insert(mix_seed(a, b));
  }
  CHECK(seen.size() == 32 * 32);
}

TEST_CASE("uniform draws live in [0,1) and uniform_pos in (0,1]") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double v = rng.uniform_pos();
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("normal moments match N(0,1) at Monte Carlo accuracy") {
  Rng rng(11);
  const int reps = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  // Four-sigma envelopes: sd(mean)=1/sqrt(reps), sd(var)=sqrt(2/reps).
  CHECK(std::fabs(mean) < 4.0 / std::sqrt(static_cast<double>(reps)));
  CHECK(std::fabs(var - 1.0) < 4.0 * std::sqrt(2.0 / reps));
}

TEST_CASE("laplace has mean zero and variance 2*scale^2") {
  Rng rng(13);
  const double scale = 1.7;
  const int reps = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double x = rng.laplace(scale);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  const double target_var = 2.0 * scale * scale;
  // sd of the empirical variance of a Laplace is sqrt((E X^4 - var^2)/reps)
  // with E X^4 = 24 scale^4, i.e. sqrt(20) scale^2 / sqrt(reps).
  const double var_sd = std::sqrt(20.0) * scale * scale / std::sqrt(reps);
  CHECK(std::fabs(mean) < 4.0 * std::sqrt(target_var / reps));
  CHECK(std::fabs(var - target_var) < 4.0 * var_sd);
}

TEST_CASE("below is uniform over [0,n) by exact-pmf chi-square") {
  Rng rng(17);
  const std::uint64_t n = 7;
  const int reps = 70000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < reps; ++i) {
    const std::uint64_t v = rng.below(n);
    REQUIRE(v < n);
    ++counts[v];
  }
  const double expected = static_cast<double>(reps) / n;
  double chi2 = 0.0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double diff = counts[k] - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < 22.46);  // chi-square(6) 0.999 quantile
}

TEST_CASE("binomial matches the exact pmf for small n") {
  // Oracle: exact Binomial(10, 0.3) probabilities, chi-square GOF.
  const std::int64_t n = 10;
  const double p = 0.3;
  std::vector<double> pmf(n + 1);
  for (std::int64_t k = 0; k <= n; ++k) {
    double c = 1.0;
    for (std::int64_t i = 0; i < k; ++i) {
      c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
    }
    pmf[k] = c * std::pow(p, static_cast<double>(k)) *
             std::pow(1.0 - p, static_cast<double>(n - k));
  }
  Rng rng(19);
  const int reps = 100000;
  std::vector<int> counts(n + 1, 0);
  for (int i = 0; i < reps; ++i) {
    const std::int64_t k = rng.binomial(n, p);
    REQUIRE(k >= 0);
    REQUIRE(k <= n);
    ++counts[k];
  }
  double chi2 = 0.0;
  int cells = 0;
  for (std::int64_t k = 0; k <= n; ++k) {
    const double expected = reps * pmf[k];
    if (expected < 5.0) continue;  // standard small-cell exclusion
    const double diff = counts[k] - expected;
    chi2 += diff * diff / expected;
    ++cells;
  }
  CHECK(cells >= 6);
  CHECK(chi2 < 29.6);  // chi-square(10) 0.999 quantile, conservative
}

TEST_CASE("binomial large-n path preserves the mean and variance") {
  Rng rng(23);
  const std::int64_t n = 100000;
  const double p = 0.37;
  const int reps = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < reps; ++i) {
    const double k = static_cast<double>(rng.binomial(n, p));
    sum += k;
    sum_sq += k * k;
  }
  const double mean = sum / reps;
  const double var = sum_sq / reps - mean * mean;
  const double target_mean = n * p;
  const double target_var = n * p * (1.0 - p);
  CHECK(std::fabs(mean - target_mean) <
        5.0 * std::sqrt(target_var / reps));
  CHECK(std::fabs(var - target_var) < 0.05 * target_var);
}

TEST_CASE("identical seeds replay identical streams") {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.bits() == b.bits());
  }
}

}  // namespace
}  // namespace distest
