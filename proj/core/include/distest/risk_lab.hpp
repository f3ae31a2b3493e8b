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

#ifndef DISTEST_RISK_LAB_HPP_
#define DISTEST_RISK_LAB_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "distest/protocols.hpp"

namespace distest {

// Bisection could not start: the risk at the bracket endpoints does not
// straddle the target.
class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), risk_lo(lo), risk_hi(hi) {}
  double risk_lo;
  double risk_hi;
};

// Requested parameters fall outside the regime an operation is defined
// for (maps to CLI exit code 3).
class RegimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Monte Carlo knobs shared by all rate-estimation drivers.
struct McSettings {
  double alpha = 0.25;               // calibration level
  std::size_t calibration_reps = 2000;
  std::size_t eval_reps = 1200;
  std::size_t panel_size = 4;
  PanelConstruction construction = PanelConstruction::dense_pm;
  double ratio_R = 2.0;
  double tol = 0.05;                 // relative bracket width at stop
  std::size_t max_iterations = 40;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
};

struct RhoStarEstimate {
  double rho_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double risk_lo = 0.0;   // risk at the initial lower bracket end
  double risk_hi = 0.0;   // risk at the initial upper bracket end
  std::size_t iterations = 0;
};

// Bisection (in log rho) of the panel risk toward target_risk; the
// threshold is calibrated once since it does not depend on rho, and all
// rho values share evaluation seed streams (common random numbers).
RhoStarEstimate estimate_rho_star(const ProtocolSpec& spec, double rho_lo,
                                  double rho_hi, double target_risk,
                                  const McSettings& mc);

struct SweepPoint {
  double param = 0.0;
  RhoStarEstimate estimate;
};

struct SweepResult {
  std::string param_name;
  double target_risk = 0.5;
  std::vector<SweepPoint> points;
};

// One estimate_rho_star per (spec, param, bracket) triple; brackets are
// expanded geometrically a few times if the initial ends fail to straddle.
SweepResult sweep_rho_star(const std::vector<ProtocolSpec>& specs,
                           const std::vector<double>& params,
                           const std::vector<std::pair<double, double>>& brackets,
                           const std::string& param_name, double target_risk,
                           const McSettings& mc);

struct RateFit {
  double exponent = 0.0;
  double stderr_ = 0.0;
  double r_squared = 0.0;
  std::string param_name;
};

// Least-squares slope of log(rho_star^2) against log(param); >= 4 points.
RateFit fit_exponent(const std::vector<double>& params,
                     const std::vector<double>& rho_star_sq,
                     const std::string& param_name);

struct ElbowFit {
  double elbow = 0.0;        // crossing of the two fitted log-log lines
  double slope_low = 0.0;    // slope on the small-parameter side
  double slope_high = 0.0;   // slope on the large-parameter side
  std::size_t break_index = 0;  // last point assigned to the low segment
};

// Free-breakpoint two-segment least squares in log-log space.
ElbowFit detect_elbow(const std::vector<double>& params,
                      const std::vector<double>& rho_star_sq);

struct DpPhaseResult {
  // Curve points where no in-class separation reaches the target risk are
  // censored: rho_star is NaN and the point is skipped by the slope fits.
  SweepResult projection;     // shared-projection protocol curve
  SweepResult scalar_chi2;    // per-server chi-square protocol curve
  std::vector<double> min_rho_star_sq;  // family minimum per grid point
  RateFit slope_high;  // fitted on the 4 largest-eps projection points
  RateFit slope_low;   // fitted on the 4 smallest-eps chi-square points
  double boundary_epsilon = 0.0;   // intersection of the two fitted lines
  double predicted_boundary = 0.0; // sqrt(d)/sqrt(m)
};

// Separation rate versus epsilon for the two DP protocols; the grid must
// lie inside (n^{-1/4}, 1].
DpPhaseResult dp_phase_sweep(std::size_t m, std::size_t n, std::size_t d,
                             const std::vector<double>& epsilon_grid,
                             double delta, const McSettings& mc);

struct NoneqProtocolRisk {
  std::string name;
  RiskEstimate risk;
};

struct NoneqReport {
  std::size_t d = 0, n = 0, m = 0;
  std::size_t b = 0;             // ceil(n log2 d)
  std::size_t total_bits = 0;    // m * b, compared against d
  bool scenario_ok = false;      // m * b <= d
  double cond_sparse = 0.0;      // d / (n ln d), large in the target regime
  double cond_growth_lhs = 0.0;  // n
  double cond_growth_rhs = 0.0;  // sqrt(d) ln d
  bool cond_growth_holds = false;
  double sandwich_lo_sq = 0.0;   // sqrt(d)/(mn)
  double sandwich_hi_sq = 0.0;   // sqrt(d)/(sqrt(m) n)
  bool sandwich_feasible = false;  // vs the L1 diameter of the ratio class
  double rho = 0.0;              // separation actually used
  double ratio_R = 0.0;
  RiskEstimate raw_forwarding_risk;
  std::vector<NoneqProtocolRisk> gaussian_risks;
  bool raw_below_one_third = false;
  bool gaussians_above_two_thirds = false;
};

// Operational non-equivalence scenario: with b = ceil(n log2 d) and
// m*b <= d, lossless forwarding separates in the multinomial model while
// every implemented b-bit protocol fails in the matched Gaussian model.
// Throws RegimeError when m*b > d.
NoneqReport nonequivalence_demo(std::size_t d, std::size_t n, std::size_t m,
                                const McSettings& mc);

}  // namespace distest

#endif  // DISTEST_RISK_LAB_HPP_
