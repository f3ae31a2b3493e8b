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
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "distest/models.hpp"
#include "distest/rng.hpp"
#include "distest/transforms.hpp"
#include "doctest.h"

namespace distest {
namespace {

TEST_CASE("counts_from_raw is permutation invariant") {
  Rng rng(3);
  const SimplexVector q({0.2, 0.3, 0.5});
  for (int t = 0; t < 50; ++t) {
    auto raw = sample_raw(q, 40, mix_seed(101, t));
    const CountVector before = counts_from_raw(raw, q.d());
    // Deterministic shuffle of the raw labels.
    for (std::size_t i = raw.size(); i > 1; --i) {
      std::swap(raw[i - 1], raw[rng.below(i)]);
    }
    const CountVector after = counts_from_raw(raw, q.d());
    CHECK(before.counts == after.counts);
    CHECK(before.n == after.n);
  }
}

TEST_CASE("root_transform squares back to counts plus shift exactly") {
  const SimplexVector q({0.25, 0.25, 0.5});
  for (int t = 0; t < 50; ++t) {
    const CountVector c = sample_counts(q, 64, mix_seed(7, t));
    const RootStat s = root_transform(c);
    REQUIRE(s.d() == c.d());
    for (std::size_t i = 0; i < c.d(); ++i) {
      const double recovered = s.values[i] * s.values[i] * 64.0;
      CHECK(recovered ==
            doctest::Approx(c.counts[i] + kDefaultCountShift).epsilon(1e-12));
      CHECK(s.values[i] >= 0.0);
    }
  }
}

TEST_CASE("center_at_null subtracts sqrt(q0) coordinatewise") {
  const SimplexVector q0 = SimplexVector::uniform(4);
  const std::vector<double> x{1.0, 0.5, 0.5, 0.0};
  const auto c = center_at_null(x, q0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c[i] == doctest::Approx(x[i] - 0.5));
  }
}

TEST_CASE("left_right_reduce is linear in x") {
  Rng rng(13);
  const std::size_t d = 8;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> a(d), x(d), y(d);
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = rng.normal();
      x[i] = rng.normal();
      y[i] = rng.normal();
    }
    const double lam = rng.normal();
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = x[i] + lam * y[i];
    const auto rx = left_right_reduce(x, a);
    const auto ry = left_right_reduce(y, a);
    const auto rz = left_right_reduce(z, a);
    REQUIRE(rz.size() == d / 2);
    for (std::size_t i = 0; i < d / 2; ++i) {
      CHECK(rz[i] == doctest::Approx(rx[i] + lam * ry[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("left_right_reduce matches its defining formula") {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> a{2.0, 0.5, 1.0, -1.0};
  const auto r = left_right_reduce(x, a);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(2.0 * 1.0 - 1.0 * 3.0));
  CHECK(r[1] == doctest::Approx(0.5 * 2.0 - (-1.0) * 4.0));
}

TEST_CASE("root stat variance is near 1/(4n) under the null") {
  const std::size_t d = 8;
  const std::int64_t n = 10000;
  const SimplexVector q0 = SimplexVector::uniform(d);
  const int reps = 10000;
  std::vector<double> sum(d, 0.0), sum_sq(d, 0.0);
  for (int r = 0; r < reps; ++r) {
    const RootStat s = root_transform(sample_counts(q0, n, mix_seed(21, r)));
    for (std::size_t i = 0; i < d; ++i) {
      sum[i] += s.values[i];
      sum_sq[i] += s.values[i] * s.values[i];
    }
  }
  const double target = 1.0 / (4.0 * n);
  for (std::size_t i = 0; i < d; ++i) {
    const double mean = sum[i] / reps;
    const double var = sum_sq[i] / reps - mean * mean;
    CHECK(var > 0.8 * target);
    CHECK(var < 1.2 * target);
  }
}

TEST_CASE("likelihood ratio factors through counts") {
  // 100 random (q, permutation) pairs: permuting a raw sample leaves the
  // likelihood ratio unchanged, matching the product form to 1e-10.
  Rng rng(17);
  const std::size_t d = 5;
  const std::int64_t n = 20;
  const SimplexVector q0 = SimplexVector::uniform(d);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> w(d);
    double s = 0.0;
    for (double& x : w) {
      x = 0.5 + rng.uniform();
      s += x;
    }
    for (double& x : w) x /= s;
    w[d - 1] = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    const SimplexVector q(w);
    auto raw = sample_raw(q, n, mix_seed(33, t));
    auto permuted = raw;
    for (std::size_t i = permuted.size(); i > 1; --i) {
      std::swap(permuted[i - 1], permuted[rng.below(i)]);
    }
    CHECK(neyman_fisher_check(raw, permuted, q, q0));
    CHECK(raw_log_likelihood_ratio(raw, q, q0) ==
          doctest::Approx(raw_log_likelihood_ratio(permuted, q, q0))
              .epsilon(1e-10));
  }
}

TEST_CASE("raw_log_likelihood_ratio matches a direct count-form oracle") {
  const SimplexVector q({0.5, 0.3, 0.2});
  const SimplexVector q0 = SimplexVector::uniform(3);
  const std::vector<std::int32_t> raw{0, 0, 1, 2, 0, 1};
  // Oracle: sum_i N_i log(q_i / q0_i) computed by hand.
  const double expected =
      3.0 * std::log(0.5 / (1.0 / 3.0)) + 2.0 * std::log(0.3 / (1.0 / 3.0)) +
      1.0 * std::log(0.2 / (1.0 / 3.0));
  CHECK(raw_log_likelihood_ratio(raw, q, q0) ==
        doctest::Approx(expected).epsilon(1e-12));
}

}  // namespace
}  // namespace distest
