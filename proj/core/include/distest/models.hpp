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

#ifndef DISTEST_MODELS_HPP_
#define DISTEST_MODELS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace distest {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSimplexTol = 1e-12;

// A point q in the (d-1)-probability simplex. Inputs are validated, never
// renormalized: a caller handing in an off-simplex vector gets an error.
struct SimplexVector {
  std::vector<double> probs;

  SimplexVector() = default;
  explicit SimplexVector(std::vector<double> p);

  std::size_t d() const { return probs.size(); }
  double operator[](std::size_t i) const { return probs[i]; }

  void validate() const;

  static SimplexVector uniform(std::size_t d);
};

// The ratio class F: all q with max_i q_i / min_i q_i <= R.
struct RatioClass {
  double R;
  explicit RatioClass(double r);
};

// Mean vector of the Gaussian location model, with per-coordinate noise
// standard deviation. The reference model uses noise_scale = 1/sqrt(2n).
struct GaussianMean {
  std::vector<double> theta;
  double noise_scale;

  GaussianMean(std::vector<double> t, double scale);
  std::size_t d() const { return theta.size(); }
};

// Per-category counts of one server's n multinomial draws.
struct CountVector {
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;

  CountVector() = default;
  CountVector(std::vector<std::int64_t> c, std::int64_t total);
  std::size_t d() const { return counts.size(); }
};

enum class PanelConstruction { dense_pm, prior_sampled };

// A finite set of alternatives at L1 (multinomial) or L2 (Gaussian)
// separation rho, standing in for the full alternative class. Reported
// risks over a panel lower-bound the worst case over H_rho.
struct AlternativePanel {
  std::variant<std::vector<SimplexVector>, std::vector<GaussianMean>> alternatives;
  double rho = 0.0;
  PanelConstruction construction = PanelConstruction::dense_pm;

  bool is_multinomial() const {
    return std::holds_alternative<std::vector<SimplexVector>>(alternatives);
  }
  std::size_t size() const;
  const std::vector<SimplexVector>& simplex_members() const {
    return std::get<std::vector<SimplexVector>>(alternatives);
  }
  const std::vector<GaussianMean>& gaussian_members() const {
    return std::get<std::vector<GaussianMean>>(alternatives);
  }
};

CountVector sample_counts(const SimplexVector& q, std::int64_t n,
                          std::uint64_t seed);

// n i.i.d. category labels in [0, d); the unreduced form of sample_counts,
// used where the raw sequence itself matters (lossless forwarding).
std::vector<std::int32_t> sample_raw(const SimplexVector& q, std::int64_t n,
                                     std::uint64_t seed);

std::vector<double> sample_gaussian(const GaussianMean& mean,
                                    std::uint64_t seed);

bool in_ratio_class(const SimplexVector& q, const RatioClass& rc);

// q_i = 1/d + f_i/sqrt(d) on the first half, mirrored with a sign flip on
// the second half; f has d/2 entries and d must be even.
SimplexVector make_dense_alternative(const std::vector<double>& f,
                                     std::size_t d);

double separation_l1(const SimplexVector& q, const SimplexVector& q0);
double separation_l2(const std::vector<double>& theta,
                     const std::vector<double>& theta0);

// Panel builders. Canonical dense direction: constant +f on the first
// half, -f on the second, scaled so the L1 (resp. L2) separation is rho.
AlternativePanel make_multinomial_panel(std::size_t d, double rho,
                                        const RatioClass& rc,
                                        PanelConstruction construction,
                                        std::size_t size, std::uint64_t seed);
AlternativePanel make_gaussian_panel(std::size_t d, double rho,
                                     double noise_scale,
                                     PanelConstruction construction,
                                     std::size_t size, std::uint64_t seed);

}  // namespace distest

#endif  // DISTEST_MODELS_HPP_
