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

#include "distest/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace distest {

double Rng::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller on explicit uniforms.
  const double u1 = uniform_pos();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 6.283185307179586476925286766559 * u2;
  cached_normal_ = r * std::sin(a);
  have_cached_normal_ = true;
  return r * std::cos(a);
}

double Rng::laplace(double scale) {
  // Inverse CDF of the two-sided exponential.
  const double u = uniform() - 0.5;
  const double s = (u < 0.0) ? -1.0 : 1.0;
  return -scale * s * std::log1p(-2.0 * std::abs(u));
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = gen_();
  } while (x >= limit);
  return x % n;
}

std::int64_t Rng::binomial(std::int64_t n, double p) {
  if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p out of [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  const bool flip = p > 0.5;
  const double q = flip ? 1.0 - p : p;
  const std::int64_t k = (static_cast<double>(n) * q < 30.0)
                             ? binomial_inversion(n, q)
                             : binomial_btrs(n, q);
  return flip ? n - k : k;
}

std::int64_t Rng::binomial_inversion(std::int64_t n, double p) {
  // CDF stepping; expected O(n*p) iterations, requires p <= 1/2.
  const double logq = std::log1p(-p);
  const double r = p / (1.0 - p);
  double pmf = std::exp(static_cast<double>(n) * logq);
  double cdf = pmf;
  const double u = uniform();
  std::int64_t k = 0;
  while (u > cdf && k < n) {
    ++k;
    pmf *= r * static_cast<double>(n - k + 1) / static_cast<double>(k);
    cdf += pmf;
    if (pmf < 1e-300 && cdf < u) {
      // Deep in the tail; remaining mass is numerically negligible.
      break;
    }
  }
  return k;
}

namespace {
// Stirling series correction  log(k!) - [k log k - k + 0.5 log(2 pi k)].
double stirling_tail(std::int64_t k) {
  static const double table[10] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834,
      0.02079067210376509, 0.01664469118982119, 0.01387612882307075,
      0.01189670994589177, 0.01041126526197209, 0.00925546218271273,
      0.00833056343336287};
  if (k < 10) return table[k];
  const double kk = static_cast<double>(k + 1);
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * kk * kk)) / (kk * kk)) / kk;
}
}  // namespace

std::int64_t Rng::binomial_btrs(std::int64_t n, double p) {
  // Hormann's transformed rejection (BTRS); valid for n*p >= 10, p <= 1/2.
  const double nd = static_cast<double>(n);
  const double q = 1.0 - p;
  const double spq = std::sqrt(nd * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / q;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((nd + 1.0) * p);

  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform_pos();
    const double us = 0.5 - std::abs(u);
    const double kd = std::floor((2.0 * a / us + b) * u + c);
    if (kd < 0.0 || kd > nd) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kd);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double km = std::abs(kd - m);
    const std::int64_t k = static_cast<std::int64_t>(kd);
    const double h = (m + 0.5) * std::log((m + 1.0) / (r * (nd - m + 1.0))) +
                     stirling_tail(static_cast<std::int64_t>(m)) +
                     stirling_tail(n - static_cast<std::int64_t>(m));
    const double accept =
        h + (nd + 1.0) * std::log((nd - m + 1.0) / (nd - kd + 1.0)) +
        (kd + 0.5) * std::log((nd - kd + 1.0) * r / (kd + 1.0)) -
        stirling_tail(k) - stirling_tail(n - k);
    (void)km;
    if (v <= accept) return k;
  }
}

std::vector<double> Rng::normal_vector(std::size_t d) {
  std::vector<double> out(d);
  for (auto& x : out) x = normal();
  return out;
}

}  // namespace distest
