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

#ifndef DISTEST_PROTOCOLS_HPP_
#define DISTEST_PROTOCOLS_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <variant>
#include <vector>

#include "distest/channels.hpp"
#include "distest/models.hpp"
#include "distest/transforms.hpp"

namespace distest {

enum class ModelKind { multinomial, gaussian };
enum class ConstraintKind { none, bandwidth, dp };
enum class RandomnessKind { local, shared };

// Central-node statistics. sum_of_squares and sum_of_bits mirror the two
// branches of the bandwidth rate; the remaining aggregators are concrete
// members of the pluggable protocol family:
//   pooled_chi2     unconstrained chi-square on pooled data (pooled rate)
//   chi2_bit        one bit per server: local chi-square above its median
//   dp_scalar_proj  DP-noised shared-direction projection, sum then square
//   dp_scalar_chi2  DP-noised standardized local chi-square, summed
//   panel_lr        max over panel members of the pooled log likelihood
//                   ratio (raw-forwarding demonstration)
enum class AggregatorKind {
  sum_of_squares,
  sum_of_bits,
  pooled_chi2,
  chi2_bit,
  dp_scalar_proj,
  dp_scalar_chi2,
  panel_lr,
};

using Truth = std::variant<SimplexVector, GaussianMean>;

struct ProtocolSpec {
  ModelKind model = ModelKind::multinomial;
  ConstraintKind constraint = ConstraintKind::none;
  RandomnessKind randomness = RandomnessKind::shared;
  std::size_t m = 1;
  std::size_t n = 1;
  std::size_t d = 2;
  std::size_t b = 0;  // bandwidth bits; also records the induced budget
  DpParams dp;
  AggregatorKind aggregator = AggregatorKind::pooled_chi2;
  double threshold = std::numeric_limits<double>::quiet_NaN();
  bool calibrated = false;
  double c_shift = kDefaultCountShift;
  // DP clip bound in units of the statistic's null standard deviation.
  double clip_multiplier = 1.0;
  std::uint64_t shared_seed = 0;
  // Panel evaluated by the panel_lr aggregator.
  std::shared_ptr<const AlternativePanel> lr_panel;

  void validate() const;
};

struct RiskEstimate {
  double type_one = 0.0;
  double worst_type_two = 0.0;
  double risk = 0.0;  // type_one + worst_type_two, on the 0-2 scale
  double mc_stderr = 0.0;
  std::size_t replicates = 0;
};

// A ProtocolSpec with its derived state (shared rotation, null reference)
// materialized once; statistic evaluation is const and thread-safe.
class ProtocolRunner {
 public:
  explicit ProtocolRunner(ProtocolSpec spec);

  const ProtocolSpec& spec() const { return spec_; }
  void set_threshold(double threshold);

  // One replicate's aggregate statistic under the given truth.
  double statistic(const Truth& truth, std::uint64_t seed) const;

  // 1 = reject the null; requires a calibrated spec.
  int run_once(const Truth& truth, std::uint64_t seed) const;

  Truth null_truth() const;

 private:
  std::vector<double> server_vector(const Truth& truth,
                                    std::uint64_t server_seed) const;
  CountVector server_counts(const Truth& truth,
                            std::uint64_t server_seed) const;

  ProtocolSpec spec_;
  std::vector<double> sqrt_q0_;
  SimplexVector q0_;
};

int run_once(const ProtocolSpec& spec, const Truth& truth, std::uint64_t seed);

// Sets spec.threshold to the conservative empirical (1 - alpha)-quantile
// of the null statistic over reps replicates. Requires reps >= 100/alpha.
ProtocolSpec calibrate(const ProtocolSpec& spec, double alpha,
                       std::size_t reps, std::uint64_t seed,
                       std::size_t jobs = 1);

// Type I from fresh null replicates plus the worst empirical type II over
// the panel; mc_stderr is the binomial stderr at the achieving member.
RiskEstimate testing_risk(const ProtocolSpec& spec,
                          const AlternativePanel& panel, std::size_t reps,
                          std::uint64_t seed, std::size_t jobs = 1);

// Unconstrained pooled chi-square protocol whose transcripts carry the
// entire local sample losslessly; b records the induced budget
// ceil(min(d log2(n+1), n log2 d)).
ProtocolSpec raw_forwarding_protocol(std::size_t d, std::size_t n,
                                     std::size_t m);

std::size_t raw_forwarding_bits(std::size_t d, std::size_t n);

// Lossless transcript encodings used by raw forwarding: fixed-width counts
// (d entries of ceil(log2(n+1)) bits) or fixed-width labels (n entries of
// ceil(log2 d) bits); whichever is shorter.
Transcript encode_counts_transcript(const CountVector& counts);
CountVector decode_counts_transcript(const Transcript& t, std::size_t d,
                                     std::int64_t n);

// Deterministic parallel map: fn(i) for i in [0, total), executed on
// `jobs` threads with results written to preallocated slots, so any jobs
// value yields identical output.
void parallel_for(std::size_t total, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace distest

#endif  // DISTEST_PROTOCOLS_HPP_
