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

#include "distest/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "distest/rng.hpp"

namespace distest {

SimplexVector::SimplexVector(std::vector<double> p) : probs(std::move(p)) {
  validate();
}

void SimplexVector::validate() const {
  if (probs.empty()) throw ValidationError("simplex: d must be >= 1");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw ValidationError("simplex: negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw ValidationError("simplex: entries sum to " + std::to_string(sum) +
                          ", expected 1 within 1e-12");
  }
}

SimplexVector SimplexVector::uniform(std::size_t d) {
  if (d == 0) throw ValidationError("simplex: d must be >= 1");
  SimplexVector q;
  q.probs.assign(d, 1.0 / static_cast<double>(d));
  return q;
}

RatioClass::RatioClass(double r) : R(r) {
  if (!(r > 1.0)) throw ValidationError("ratio class: R must be > 1");
}

GaussianMean::GaussianMean(std::vector<double> t, double scale)
    : theta(std::move(t)), noise_scale(scale) {
  if (theta.empty()) throw ValidationError("gaussian mean: d must be >= 1");
  if (!(noise_scale > 0.0))
    throw ValidationError("gaussian mean: noise_scale must be > 0");
}

CountVector::CountVector(std::vector<std::int64_t> c, std::int64_t total)
    : counts(std::move(c)), n(total) {
  std::int64_t sum = 0;
  for (std::int64_t x : counts) {
    if (x < 0) throw ValidationError("counts: negative entry");
    sum += x;
  }
  if (sum != n) throw ValidationError("counts: entries do not sum to n");
}

std::size_t AlternativePanel::size() const {
  return is_multinomial() ? simplex_members().size()
                          : gaussian_members().size();
}

CountVector sample_counts(const SimplexVector& q, std::int64_t n,
                          std::uint64_t seed) {
  q.validate();
  if (n < 0) throw ValidationError("sample_counts: n must be >= 0");
  Rng rng(seed);
  const std::size_t d = q.d();
  std::vector<std::int64_t> counts(d, 0);
  // Conditional-binomial decomposition of the multinomial.
  std::int64_t remaining = n;
  double mass_left = 1.0;
  for (std::size_t i = 0; i + 1 < d && remaining > 0; ++i) {
    const double p = std::clamp(q[i] / mass_left, 0.0, 1.0);
    counts[i] = rng.binomial(remaining, p);
    remaining -= counts[i];
    mass_left -= q[i];
    if (mass_left <= 0.0) break;
  }
  counts[d - 1] += remaining;
  return CountVector(std::move(counts), n);
}

std::vector<std::int32_t> sample_raw(const SimplexVector& q, std::int64_t n,
                                     std::uint64_t seed) {
  q.validate();
  if (n < 0) throw ValidationError("sample_raw: n must be >= 0");
  Rng rng(seed);
  const std::size_t d = q.d();
  std::vector<double> cdf(d);
  std::partial_sum(q.probs.begin(), q.probs.end(), cdf.begin());
  cdf[d - 1] = 1.0;
  std::vector<std::int32_t> raw(static_cast<std::size_t>(n));
  for (auto& label : raw) {
    const double u = rng.uniform();
    label = static_cast<std::int32_t>(
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  return raw;
}

std::vector<double> sample_gaussian(const GaussianMean& mean,
                                    std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(mean.d());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mean.theta[i] + mean.noise_scale * rng.normal();
  }
  return out;
}

bool in_ratio_class(const SimplexVector& q, const RatioClass& rc) {
  q.validate();
  const auto [lo, hi] = std::minmax_element(q.probs.begin(), q.probs.end());
  if (*lo == 0.0) return *hi == 0.0;  // all-zero is impossible on a simplex
  return *hi / *lo <= rc.R;
}

SimplexVector make_dense_alternative(const std::vector<double>& f,
                                     std::size_t d) {
  if (d == 0 || d % 2 != 0)
    throw ValidationError("dense alternative: d must be even and positive");
  if (f.size() != d / 2)
    throw ValidationError("dense alternative: f must have d/2 entries");
  const double base = 1.0 / static_cast<double>(d);
  const double root_d = std::sqrt(static_cast<double>(d));
  SimplexVector q;
  q.probs.resize(d);
  for (std::size_t i = 0; i < d / 2; ++i) {
    const double shift = f[i] / root_d;
    q.probs[i] = base + shift;
    q.probs[i + d / 2] = base - shift;
    if (q.probs[i] < 0.0 || q.probs[i] > 1.0 || q.probs[i + d / 2] < 0.0 ||
        q.probs[i + d / 2] > 1.0) {
      throw ValidationError("dense alternative: entry outside [0,1]");
    }
  }
  q.validate();
  return q;
}

double separation_l1(const SimplexVector& q, const SimplexVector& q0) {
  if (q.d() != q0.d())
    throw ValidationError("separation_l1: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < q.d(); ++i) s += std::abs(q[i] - q0[i]);
  return s;
}

double separation_l2(const std::vector<double>& theta,
                     const std::vector<double>& theta0) {
  if (theta.size() != theta0.size())
    throw ValidationError("separation_l2: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double dlt = theta[i] - theta0[i];
    s += dlt * dlt;
  }
  return std::sqrt(s);
}

namespace {

// Scale a half-vector f so the induced L1 separation 2*sum|f_i|/sqrt(d)
// equals rho exactly.
std::vector<double> rescale_to_l1(std::vector<double> f, std::size_t d,
                                  double rho) {
  double l1 = 0.0;
  for (double x : f) l1 += std::abs(x);
  const double current = 2.0 * l1 / std::sqrt(static_cast<double>(d));
  if (current <= 0.0) throw ValidationError("panel: zero direction");
  for (double& x : f) x *= rho / current;
  return f;
}

}  // namespace

AlternativePanel make_multinomial_panel(std::size_t d, double rho,
                                        const RatioClass& rc,
                                        PanelConstruction construction,
                                        std::size_t size, std::uint64_t seed) {
  if (!(rho > 0.0)) throw ValidationError("panel: rho must be > 0");
  if (size == 0) throw ValidationError("panel: empty");
  const SimplexVector q0 = SimplexVector::uniform(d);
  std::vector<SimplexVector> members;
  if (construction == PanelConstruction::dense_pm) {
    // Canonical dense direction; further members flip sign blocks.
    Rng rng(mix_seed(seed, 0xd5));
    for (std::size_t k = 0; k < size; ++k) {
      std::vector<double> f(d / 2, 1.0);
      if (k > 0) {
        for (auto& x : f) x = (rng.uniform() < 0.5) ? -1.0 : 1.0;
      }
      members.push_back(make_dense_alternative(rescale_to_l1(f, d, rho), d));
    }
  } else {
    Rng rng(mix_seed(seed, 0xa5));
    std::size_t attempts = 0;
    while (members.size() < size) {
      if (++attempts > 200 * size)
        throw ValidationError("panel: could not sample members inside F");
      std::vector<double> f = rng.normal_vector(d / 2);
      SimplexVector q;
      try {
        q = make_dense_alternative(rescale_to_l1(std::move(f), d, rho), d);
      } catch (const ValidationError&) {
        continue;
      }
      if (!in_ratio_class(q, rc)) continue;
      members.push_back(std::move(q));
    }
  }
  for (const auto& q : members) {
    if (separation_l1(q, q0) < rho * (1.0 - 1e-9))
      throw ValidationError("panel: member below separation rho");
    if (!in_ratio_class(q, rc))
      throw ValidationError("panel: member outside ratio class");
  }
  AlternativePanel panel;
  panel.alternatives = std::move(members);
  panel.rho = rho;
  panel.construction = construction;
  return panel;
}

AlternativePanel make_gaussian_panel(std::size_t d, double rho,
                                     double noise_scale,
                                     PanelConstruction construction,
                                     std::size_t size, std::uint64_t seed) {
  if (!(rho > 0.0)) throw ValidationError("panel: rho must be > 0");
  if (size == 0) throw ValidationError("panel: empty");
  std::vector<GaussianMean> members;
  Rng rng(mix_seed(seed, 0x6a));
  for (std::size_t k = 0; k < size; ++k) {
    std::vector<double> theta(d);
    if (construction == PanelConstruction::dense_pm && k == 0) {
      for (std::size_t i = 0; i < d; ++i)
        theta[i] = (2 * i < d) ? 1.0 : -1.0;
    } else {
      theta = rng.normal_vector(d);
    }
    const double norm = separation_l2(theta, std::vector<double>(d, 0.0));
    // Alternatives sit at L2 distance rho from the uniform null's
    // root-domain point (1/sqrt(d) per coordinate), not from the origin.
    const double base = 1.0 / std::sqrt(static_cast<double>(d));
    for (auto& x : theta) x = base + x * rho / norm;
    members.emplace_back(std::move(theta), noise_scale);
  }
  AlternativePanel panel;
  panel.alternatives = std::move(members);
  panel.rho = rho;
  panel.construction = construction;
  return panel;
}

}  // namespace distest
