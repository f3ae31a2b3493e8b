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

#ifndef DISTEST_EQUIVALENCE_LAB_HPP_
#define DISTEST_EQUIVALENCE_LAB_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "distest/models.hpp"

namespace distest {

class Rng;

// Exactly represented finitely supported measure. Atoms are real labels;
// alignment between measures matches atoms by exact value.
struct FiniteMeasure {
  std::vector<double> atoms;
  std::vector<double> weights;

  void validate(bool probability = true) const;
  double total_mass() const;
  std::string to_json() const;
  static FiniteMeasure from_json(const std::string& text);
};

// Row-stochastic matrix from source atoms to target atoms.
struct KernelMatrix {
  std::vector<double> source_atoms;
  std::vector<double> target_atoms;
  std::vector<std::vector<double>> rows;  // rows[i][j] = K(target j | source i)

  void validate() const;
  static KernelMatrix identity(const std::vector<double>& atoms);
  std::string to_json() const;
  static KernelMatrix from_json(const std::string& text);
};

// TV distance under the convention TV = sup_A |P(A) - Q(A)| = (1/2) L1.
// Supports are merged; atoms missing on one side carry weight 0.
double tv_exact(const FiniteMeasure& p, const FiniteMeasure& q);

// Draw one pair from the maximal coupling of (p, q). The marginals are
// exact and the mismatch probability equals tv_exact(p, q).
std::pair<double, double> maximal_coupling(const FiniteMeasure& p,
                                           const FiniteMeasure& q, Rng& rng);

FiniteMeasure apply_kernel(const FiniteMeasure& p, const KernelMatrix& k);

KernelMatrix compose_kernels(const KernelMatrix& first,
                             const KernelMatrix& second);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// TV(pK, qK) <= TV(p, q).
InequalityCheck check_data_processing(const FiniteMeasure& p,
                                      const FiniteMeasure& q,
                                      const KernelMatrix& k);

// TV of product measures <= sum of per-factor TVs (full enumeration).
InequalityCheck check_product_bound(
    const std::vector<std::pair<FiniteMeasure, FiniteMeasure>>& pairs);

// (1/2) ||p - q||_1 <= Hellinger-style RHS sqrt(sum (sqrt p - sqrt q)^2).
InequalityCheck hellinger_l1_check(const FiniteMeasure& p,
                                   const FiniteMeasure& q);

struct PinskerCheck {
  double tv_mc = 0.0;
  double mc_stderr = 0.0;
  double bound = 0.0;
  double tv_closed_form = 0.0;
  bool holds = false;
};

// TV between n-fold products of N(f, sigma^2 I) and N(g, sigma^2 I):
// Monte Carlo likelihood-ratio estimate vs the bound sqrt(n)/(2 sigma)
// * ||f - g||_2, with the closed form 2 Phi(Delta/2) - 1 as cross-check.
PinskerCheck pinsker_gaussian_check(const std::vector<double>& f,
                                    const std::vector<double>& g,
                                    std::size_t n, double sigma,
                                    std::size_t reps, std::uint64_t seed);

struct GaussianMaxReport {
  double mean_abs_max = 0.0;
  double mean_bound = 0.0;
  double tail_freq = 0.0;
  double tail_bound = 0.0;
  double spectral_norm = 0.0;
  bool holds = false;
};

// For G = M Z with Z standard normal in R^K: E max_i |G_i| <= 3 ||M||
// sqrt(log K v log 2) and P(max G_i^2 >= ||M||^2 x) <= 2 K exp(-x/4).
GaussianMaxReport gaussian_max_check(const std::vector<std::vector<double>>& m,
                                     double tail_x, std::size_t reps,
                                     std::uint64_t seed);

// Upper bound on the deficiency of modelQ relative to modelP, restricted
// to the given parameter grid, obtained by exhibiting the kernel c:
// max_f TV(Q_f c, P_f).
double deficiency_upper(const std::vector<FiniteMeasure>& model_p,
                        const std::vector<FiniteMeasure>& model_q,
                        const KernelMatrix& c);

FiniteMeasure binomial_measure(std::size_t n, double q);

// CDF-difference discretization of N(mean, sd^2) onto a uniform grid over
// mean +/- half_width_sds standard deviations. discretization_error
// reports the truncated tail mass (reassigned to the end bins).
struct DiscretizedGaussian {
  FiniteMeasure measure;
  double discretization_error = 0.0;
};
DiscretizedGaussian discretize_gaussian(double mean, double sd, double lo,
                                        double hi, std::size_t bins);

// Kernel from binomial counts k in {0..n} to the bin grid: map k to
// sqrt((k + c_shift)/n), add Gaussian jitter topping the delta-method
// variance (1 - qhat)/(4n) up to the target 1/(2n), then bin.
KernelMatrix root_bin_kernel(std::size_t n, double lo, double hi,
                             std::size_t bins, double c_shift);

struct CarterDirectionReport {
  std::vector<std::size_t> n_values;
  std::vector<double> deficiency;   // one entry per n
  std::vector<double> discretization_error;
  bool strictly_decreasing = false;
};

// One-dimensional check that the root transform carries Binomial(n, q)
// close to N(sqrt q, 1/(2n)) uniformly over a q-grid inside the ratio
// class: deficiency_upper per n, expected to decrease in n.
CarterDirectionReport carter_direction_check(
    const std::vector<std::size_t>& n_values, const std::vector<double>& q_grid,
    std::size_t bins, double c_shift);

struct KernelDpCertificate {
  double epsilon_hat = 0.0;  // max log density ratio across input pairs
  bool certified = false;    // epsilon_hat <= claimed epsilon
};

// Pure-DP certificate of a finite kernel by direct ratio enumeration.
KernelDpCertificate kernel_dp_certificate(const KernelMatrix& k,
                                          double epsilon);

struct TransferReport {
  double risk_model_p = 0.0;   // risk of the test in model P via kernels K_j
  double risk_model_q = 0.0;   // risk in model Q via composed kernels C K_j
  double gap = 0.0;
  double bound = 0.0;          // m * sup_f TV(Q_f C, P_f)
  bool gap_holds = false;
  bool bit_budget_holds = false;
  bool dp_certified = false;   // composed kernels keep the channel's epsilon
};

// Exact finite-instance protocol transfer. Each of the m servers draws one
// atom from its model, pushes it through its channel kernel (K_j in model
// P; C followed by K_j in model Q), and the test maps the tuple of
// transcript indices to a decision. Risks are computed by full
// enumeration of transcript tuples; index 0 of each family is the null.
TransferReport protocol_transfer(
    const std::vector<FiniteMeasure>& model_p,
    const std::vector<FiniteMeasure>& model_q, const KernelMatrix& c,
    const std::vector<KernelMatrix>& channels, std::size_t bit_budget,
    const std::function<int(const std::vector<std::size_t>&)>& test,
    double channel_epsilon = 0.0);

}  // namespace distest

#endif  // DISTEST_EQUIVALENCE_LAB_HPP_
