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
#include "doctest.h"

namespace distest {
namespace {

TEST_CASE("simplex validation accepts exact points and rejects bad mass") {
  CHECK_NOTHROW(SimplexVector({0.25, 0.25, 0.25, 0.25}));
  CHECK_NOTHROW(SimplexVector::uniform(7));
  CHECK_THROWS_AS(SimplexVector({0.5, 0.6}), ValidationError);
  CHECK_THROWS_AS(SimplexVector({1.2, -0.2}), ValidationError);
  CHECK_THROWS_AS(SimplexVector(std::vector<double>{}), ValidationError);
}

TEST_CASE("ratio class requires R > 1 and membership uses max/min") {
  CHECK_THROWS_AS(RatioClass(1.0), ValidationError);
  CHECK_THROWS_AS(RatioClass(0.5), ValidationError);
  const RatioClass rc(2.0);
  CHECK(in_ratio_class(SimplexVector({0.5, 0.25, 0.25}), rc));
  // Boundary convention: ratio exactly R is inside the class.
  CHECK(in_ratio_class(SimplexVector({0.4, 0.2, 0.2, 0.2}), rc));
  CHECK_FALSE(in_ratio_class(SimplexVector({0.7, 0.1, 0.1, 0.1}), rc));
}

TEST_CASE("separation_l1 worked values") {
  const SimplexVector u2 = SimplexVector::uniform(2);
  CHECK(separation_l1(u2, u2) == 0.0);
  CHECK(separation_l1(SimplexVector({1.0, 0.0}), SimplexVector({0.0, 1.0})) ==
        doctest::Approx(2.0));
  CHECK(separation_l1(SimplexVector({0.6, 0.4}), u2) ==
        doctest::Approx(0.2));
}

TEST_CASE("separation_l1 is a metric on random triples") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 3 + rng.below(5);
    auto draw = [&]() {
      std::vector<double> w(d);
      double s = 0.0;
      for (double& x : w) {
        x = rng.uniform_pos();
        s += x;
      }
      for (double& x : w) x /= s;
      // Exact renormalization so the simplex validator accepts the point.
      w[d - 1] = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
      return SimplexVector(w);
    };
    const SimplexVector a = draw(), b = draw(), c = draw();
    CHECK(separation_l1(a, b) == doctest::Approx(separation_l1(b, a)));
    CHECK(separation_l1(a, c) <=
          separation_l1(a, b) + separation_l1(b, c) + 1e-12);
    CHECK(separation_l1(a, a) == 0.0);
  }
}

TEST_CASE("sample_counts totals n and matches exact marginals") {
  const SimplexVector q({0.7, 0.3});
  const std::int64_t n = 20;
  // Oracle: coordinate 0 of a (0.7, 0.3) multinomial is Binomial(20, 0.7);
  // compare the empirical mean against its exact standard error.
  const int reps = 10000;
  double sum0 = 0.0;
  for (int r = 0; r < reps; ++r) {
    const CountVector c = sample_counts(q, n, mix_seed(42, r));
    REQUIRE(c.counts[0] + c.counts[1] == n);
    sum0 += static_cast<double>(c.counts[0]);
  }
  const double mean0 = sum0 / reps;
  const double se = std::sqrt(n * 0.7 * 0.3 / reps);
  CHECK(std::fabs(mean0 - n * 0.7) < 4.0 * se);
}

TEST_CASE("empirical count frequencies converge to q coordinatewise") {
  const SimplexVector q({0.1, 0.2, 0.3, 0.4});
  const std::int64_t n = 50;
  const int reps = 10000;
  std::vector<double> freq(q.d(), 0.0);
  for (int r = 0; r < reps; ++r) {
    const CountVector c = sample_counts(q, n, mix_seed(7, r));
    for (std::size_t i = 0; i < q.d(); ++i) {
      freq[i] += static_cast<double>(c.counts[i]) / n;
    }
  }
  for (std::size_t i = 0; i < q.d(); ++i) {
    freq[i] /= reps;
    const double se = std::sqrt(q[i] * (1.0 - q[i]) / (n * double(reps)));
    CHECK(std::fabs(freq[i] - q[i]) < 4.0 * se);
  }
}

TEST_CASE("sample_raw reduces to the same distribution as sample_counts") {
  const SimplexVector q({0.2, 0.5, 0.3});
  const std::int64_t n = 30;
  const int reps = 4000;
  std::vector<double> mean_raw(q.d(), 0.0);
  for (int r = 0; r < reps; ++r) {
    const auto raw = sample_raw(q, n, mix_seed(9, r));
    REQUIRE(raw.size() == static_cast<std::size_t>(n));
    for (std::int32_t label : raw) {
      REQUIRE(label >= 0);
      REQUIRE(label < static_cast<std::int32_t>(q.d()));
      mean_raw[label] += 1.0;
    }
  }
  for (std::size_t i = 0; i < q.d(); ++i) {
    mean_raw[i] /= static_cast<double>(reps) * n;
    const double se = std::sqrt(q[i] * (1.0 - q[i]) / (n * double(reps)));
    CHECK(std::fabs(mean_raw[i] - q[i]) < 4.0 * se);
  }
}

TEST_CASE("make_dense_alternative is an exact simplex point in the class") {
  const std::size_t d = 8;
  const RatioClass rc(2.0);
  const double cap = (rc.R - 1.0) / (rc.R + 1.0);
  Rng rng(31);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> f(d / 2);
    for (double& x : f) {
      // keep sqrt(d) * |f| <= cap so the point stays inside the class
      x = (2.0 * rng.uniform() - 1.0) * cap / std::sqrt(double(d));
    }
    const SimplexVector q = make_dense_alternative(f, d);
    CHECK_NOTHROW(q.validate());
    CHECK(in_ratio_class(q, rc));
  }
  CHECK_THROWS_AS(make_dense_alternative({0.1}, 3), ValidationError);
}

TEST_CASE("multinomial panel members hit the requested separation") {
  const std::size_t d = 8;
  const double rho = 0.2;
  const RatioClass rc(2.0);
  for (PanelConstruction pc :
       {PanelConstruction::dense_pm, PanelConstruction::prior_sampled}) {
    const AlternativePanel panel =
        make_multinomial_panel(d, rho, rc, pc, 4, 123);
    CHECK(panel.is_multinomial());
    CHECK(panel.size() == 4);
    const SimplexVector q0 = SimplexVector::uniform(d);
    for (const SimplexVector& q : panel.simplex_members()) {
      CHECK(separation_l1(q, q0) >= rho - 1e-9);
      CHECK(in_ratio_class(q, rc));
    }
  }
}

TEST_CASE("gaussian panel members hit the requested l2 separation") {
  const std::size_t d = 8;
  const double rho = 0.3;
  const AlternativePanel panel = make_gaussian_panel(
      d, rho, 0.1, PanelConstruction::dense_pm, 4, 77);
  CHECK_FALSE(panel.is_multinomial());
  const std::vector<double> null_point(d, 1.0 / std::sqrt(double(d)));
  for (const GaussianMean& g : panel.gaussian_members()) {
    CHECK(separation_l2(g.theta, null_point) ==
          doctest::Approx(rho).epsilon(1e-9));
    CHECK(g.noise_scale == doctest::Approx(0.1));
  }
}

TEST_CASE("panel construction rejects rho outside the simplex diameter") {
  const RatioClass rc(2.0);
  CHECK_THROWS(make_multinomial_panel(8, 3.0, rc,
                                      PanelConstruction::dense_pm, 4, 1));
}

TEST_CASE("sample_gaussian has the requested mean and scale") {
  const GaussianMean g({1.0, -2.0, 0.5}, 0.25);
  const int reps = 20000;
  std::vector<double> mean(3, 0.0);
  double var_acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto x = sample_gaussian(g, mix_seed(55, r));
    for (std::size_t i = 0; i < 3; ++i) {
      mean[i] += x[i];
      const double c = x[i] - g.theta[i];
      var_acc += c * c;
    }
  }
  for (std::size_t i = 0; i < 3; ++i) {
    mean[i] /= reps;
    CHECK(std::fabs(mean[i] - g.theta[i]) <
          4.0 * g.noise_scale / std::sqrt(double(reps)));
  }
  const double var = var_acc / (3.0 * reps);
  CHECK(var == doctest::Approx(g.noise_scale * g.noise_scale).epsilon(0.05));
}

}  // namespace
}  // namespace distest
