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

#include "distest/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include "distest/rng.hpp"

namespace distest {
namespace {

constexpr std::uint64_t kServerTag = 0x736572766572ULL;
constexpr std::uint64_t kCalibrateTag = 0xca11b7a7eULL;
constexpr std::uint64_t kNullEvalTag = 0x7e57ULL;
constexpr std::uint64_t kAltEvalTag = 0xa17ULL;

std::size_t clog2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(x - 1));
}

}  // namespace

void ProtocolSpec::validate() const {
  if (m < 1 || n < 1 || d < 1) {
    throw ValidationError("ProtocolSpec: m, n, d must all be >= 1");
  }
  const auto require = [&](ConstraintKind want, const char* what) {
    if (constraint != want) {
      throw ValidationError(std::string("ProtocolSpec: aggregator ") + what +
                            " does not match the constraint kind");
    }
  };
  switch (aggregator) {
    case AggregatorKind::pooled_chi2:
    case AggregatorKind::sum_of_squares:
      require(ConstraintKind::none, "requires unconstrained transcripts");
      break;
    case AggregatorKind::panel_lr:
      require(ConstraintKind::none, "panel_lr requires pooled data");
      if (!lr_panel || !lr_panel->is_multinomial() ||
          model != ModelKind::multinomial) {
        throw ValidationError(
            "ProtocolSpec: panel_lr needs a multinomial model and panel");
      }
      break;
    case AggregatorKind::sum_of_bits:
    case AggregatorKind::chi2_bit:
      require(ConstraintKind::bandwidth, "requires a bandwidth constraint");
      if (b < 1) throw ValidationError("ProtocolSpec: b must be >= 1");
      break;
    case AggregatorKind::dp_scalar_proj:
    case AggregatorKind::dp_scalar_chi2:
      require(ConstraintKind::dp, "requires a DP constraint");
      break;
  }
}

ProtocolRunner::ProtocolRunner(ProtocolSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  q0_ = SimplexVector::uniform(spec_.d);
  sqrt_q0_.resize(spec_.d);
  for (std::size_t i = 0; i < spec_.d; ++i) {
    sqrt_q0_[i] = std::sqrt(q0_[i]);
  }
}

void ProtocolRunner::set_threshold(double threshold) {
  spec_.threshold = threshold;
  spec_.calibrated = true;
}

Truth ProtocolRunner::null_truth() const {
  if (spec_.model == ModelKind::multinomial) return q0_;
  return GaussianMean(sqrt_q0_,
                      1.0 / std::sqrt(2.0 * static_cast<double>(spec_.n)));
}

CountVector ProtocolRunner::server_counts(const Truth& truth,
                                          std::uint64_t server_seed) const {
  const auto* q = std::get_if<SimplexVector>(&truth);
  if (q == nullptr) {
    throw ValidationError("protocol: multinomial truth required");
  }
  return sample_counts(*q, static_cast<std::int64_t>(spec_.n), server_seed);
}

std::vector<double> ProtocolRunner::server_vector(
    const Truth& truth, std::uint64_t server_seed) const {
  if (spec_.model == ModelKind::multinomial) {
    const auto counts = server_counts(truth, server_seed);
    const auto root = root_transform(counts, spec_.c_shift);
    auto x = center_at_null(root.values, q0_);
    // Rescale so the per-coordinate null variance matches 1/(2n).
    for (double& v : x) v *= std::sqrt(2.0);
    return x;
  }
  const auto* mean = std::get_if<GaussianMean>(&truth);
  if (mean == nullptr) {
    throw ValidationError("protocol: Gaussian truth required");
  }
  if (mean->d() != spec_.d) {
    throw ValidationError("protocol: truth dimension mismatch");
  }
  auto x = sample_gaussian(*mean, server_seed);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= sqrt_q0_[i];
  return x;
}

double ProtocolRunner::statistic(const Truth& truth,
                                 std::uint64_t seed) const {
  const double nn = static_cast<double>(spec_.n);
  const double dd = static_cast<double>(spec_.d);

  switch (spec_.aggregator) {
    case AggregatorKind::pooled_chi2: {
      if (spec_.model == ModelKind::multinomial) {
        std::vector<std::int64_t> pooled(spec_.d, 0);
        for (std::size_t j = 0; j < spec_.m; ++j) {
          const auto counts =
              server_counts(truth, mix_seed(seed, kServerTag, j));
          for (std::size_t i = 0; i < spec_.d; ++i) {
            pooled[i] += counts.counts[i];
          }
        }
        const double expected =
            static_cast<double>(spec_.m) * nn / dd;
        double stat = 0.0;
        for (std::size_t i = 0; i < spec_.d; ++i) {
          const double diff = static_cast<double>(pooled[i]) - expected;
          stat += diff * diff / expected;
        }
        return stat;
      }
      std::vector<double> sum(spec_.d, 0.0);
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const auto x = server_vector(truth, mix_seed(seed, kServerTag, j));
        for (std::size_t i = 0; i < spec_.d; ++i) sum[i] += x[i];
      }
      return std::inner_product(sum.begin(), sum.end(), sum.begin(), 0.0);
    }

    case AggregatorKind::panel_lr: {
      std::vector<std::int64_t> pooled(spec_.d, 0);
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const auto counts = server_counts(truth, mix_seed(seed, kServerTag, j));
        for (std::size_t i = 0; i < spec_.d; ++i) pooled[i] += counts.counts[i];
      }
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& qf : spec_.lr_panel->simplex_members()) {
        double ll = 0.0;
        for (std::size_t i = 0; i < spec_.d; ++i) {
          if (pooled[i] == 0) continue;
          if (qf[i] == 0.0) {
            ll = -std::numeric_limits<double>::infinity();
            break;
          }
          ll += static_cast<double>(pooled[i]) * std::log(qf[i] / q0_[i]);
        }
        best = std::max(best, ll);
      }
      return best;
    }

    case AggregatorKind::sum_of_squares: {
      double stat = 0.0;
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const auto x = server_vector(truth, mix_seed(seed, kServerTag, j));
        stat += std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
      }
      return stat;
    }

    case AggregatorKind::sum_of_bits: {
      if (spec_.randomness == RandomnessKind::shared) {
        const std::size_t k = std::min(spec_.b, spec_.d);
        // The rotation is a public coin: it is redrawn for every replicate
        // (seeded jointly by the shared seed and the replicate seed), so the
        // reported risk is averaged over the shared randomness rather than
        // conditioned on one rotation that a worst-case alternative could
        // sit orthogonal to.
        const SharedRandomness shared = SharedRandomness::make(
            mix_seed(spec_.shared_seed, seed), spec_.d, k);
        std::vector<double> acc(k, 0.0);
        for (std::size_t j = 0; j < spec_.m; ++j) {
          const auto x = server_vector(truth, mix_seed(seed, kServerTag, j));
          const auto t = quantize_shared(x, spec_.b, shared, j);
          for (std::size_t r = 0; r < k; ++r) {
            acc[r] += t.bits[r] ? 1.0 : -1.0;
          }
        }
        return std::inner_product(acc.begin(), acc.end(), acc.begin(), 0.0);
      }
      std::vector<double> acc(spec_.d, 0.0);
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const auto x = server_vector(truth, mix_seed(seed, kServerTag, j));
        const auto t = quantize_local(x, spec_.b, j, spec_.m);
        const auto idx = local_assignment(spec_.d, spec_.b, j);
        for (std::size_t r = 0; r < idx.size(); ++r) {
          acc[idx[r]] += t.bits[r] ? 1.0 : -1.0;
        }
      }
      return std::inner_product(acc.begin(), acc.end(), acc.begin(), 0.0);
    }

    case AggregatorKind::chi2_bit: {
      // One bit: local chi-square above (approximately) its null median.
      const double median = dd - 2.0 / 3.0;
      double stat = 0.0;
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const auto x = server_vector(truth, mix_seed(seed, kServerTag, j));
        const double chi2 =
            2.0 * nn *
            std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        stat += chi2 > median ? 1.0 : 0.0;
      }
      return stat;
    }

    case AggregatorKind::dp_scalar_proj: {
      const double null_sd = 1.0 / std::sqrt(2.0 * nn);
      const DpParams p(spec_.dp.epsilon, spec_.dp.delta,
                       spec_.clip_multiplier * null_sd);
      // Server j projects onto shared direction j mod d; per-direction
      // sums are squared and added, a chi-square across the shared basis.
      // The basis is a public coin, redrawn per replicate (see sum_of_bits).
      const SharedRandomness shared = SharedRandomness::make(
          mix_seed(spec_.shared_seed, seed), spec_.d, spec_.d);
      std::vector<double> direction_sum(spec_.d, 0.0);
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const std::uint64_t sj = mix_seed(seed, kServerTag, j);
        const auto x = server_vector(truth, sj);
        const auto& row = shared.rotation[j % spec_.d];
        const double z =
            std::inner_product(row.begin(), row.end(), x.begin(), 0.0);
        direction_sum[j % spec_.d] += dp_mechanism({z}, p, sj, j).payload[0];
      }
      double stat = 0.0;
      for (double s : direction_sum) stat += s * s;
      return stat;
    }

    case AggregatorKind::dp_scalar_chi2: {
      // Standardized chi-square has null sd approximately 1.
      const DpParams p(spec_.dp.epsilon, spec_.dp.delta,
                       spec_.clip_multiplier);
      double sum = 0.0;
      for (std::size_t j = 0; j < spec_.m; ++j) {
        const std::uint64_t sj = mix_seed(seed, kServerTag, j);
        const auto x = server_vector(truth, sj);
        const double chi2 =
            2.0 * nn *
            std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
        const double t = (chi2 - dd) / std::sqrt(2.0 * dd);
        sum += dp_mechanism({t}, p, sj, j).payload[0];
      }
      return sum;
    }
  }
  throw ValidationError("protocol: unknown aggregator");
}

int ProtocolRunner::run_once(const Truth& truth, std::uint64_t seed) const {
  if (!spec_.calibrated) {
    throw ValidationError("run_once: spec must be calibrated first");
  }
  return statistic(truth, seed) > spec_.threshold ? 1 : 0;
}

int run_once(const ProtocolSpec& spec, const Truth& truth,
             std::uint64_t seed) {
  return ProtocolRunner(spec).run_once(truth, seed);
}

void parallel_for(std::size_t total, std::size_t jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (total == 0) return;
  jobs = std::max<std::size_t>(1, std::min(jobs, total));
  if (jobs == 1) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = total * t / jobs;
      const std::size_t hi = total * (t + 1) / jobs;
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

ProtocolSpec calibrate(const ProtocolSpec& spec, double alpha,
                       std::size_t reps, std::uint64_t seed,
                       std::size_t jobs) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("calibrate: alpha must lie in (0, 1)");
  }
  if (static_cast<double>(reps) < 100.0 / alpha) {
    throw ValidationError("calibrate: reps must be at least 100/alpha");
  }
  const ProtocolRunner runner(spec);
  const Truth null = runner.null_truth();
  std::vector<double> stats(reps);
  parallel_for(reps, jobs, [&](std::size_t r) {
    stats[r] = runner.statistic(null, mix_seed(seed, kCalibrateTag, r));
  });
  std::sort(stats.begin(), stats.end());
  // Conservative quantile: ties broken upward.
  auto k = static_cast<std::size_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(reps)));
  k = std::min(k, reps - 1);
  ProtocolSpec out = spec;
  out.threshold = stats[k];
  out.calibrated = true;
  return out;
}

RiskEstimate testing_risk(const ProtocolSpec& spec,
                          const AlternativePanel& panel, std::size_t reps,
                          std::uint64_t seed, std::size_t jobs) {
  if (panel.size() == 0) {
    throw ValidationError("testing_risk: panel must be nonempty");
  }
  const ProtocolRunner runner(spec);
  if (!spec.calibrated) {
    throw ValidationError("testing_risk: spec must be calibrated first");
  }
  if (panel.is_multinomial() != (spec.model == ModelKind::multinomial)) {
    throw ValidationError("testing_risk: panel kind must match the model");
  }

  const Truth null = runner.null_truth();
  std::vector<std::uint8_t> null_rejects(reps);
  parallel_for(reps, jobs, [&](std::size_t r) {
    null_rejects[r] =
        static_cast<std::uint8_t>(runner.run_once(null, mix_seed(seed, kNullEvalTag, r)));
  });
  const double type_one =
      static_cast<double>(
          std::accumulate(null_rejects.begin(), null_rejects.end(), 0)) /
      static_cast<double>(reps);

  double worst_type_two = 0.0;
  for (std::size_t member = 0; member < panel.size(); ++member) {
    const Truth truth =
        panel.is_multinomial()
            ? Truth(panel.simplex_members()[member])
            : Truth(panel.gaussian_members()[member]);
    std::vector<std::uint8_t> rejects(reps);
    parallel_for(reps, jobs, [&](std::size_t r) {
      rejects[r] = static_cast<std::uint8_t>(
          runner.run_once(truth, mix_seed(seed, kAltEvalTag, member, r)));
    });
    const double accept =
        1.0 - static_cast<double>(
                  std::accumulate(rejects.begin(), rejects.end(), 0)) /
                  static_cast<double>(reps);
    worst_type_two = std::max(worst_type_two, accept);
  }

  RiskEstimate est;
  est.type_one = type_one;
  est.worst_type_two = worst_type_two;
  est.risk = type_one + worst_type_two;
  est.replicates = reps;
  est.mc_stderr =
      std::sqrt((type_one * (1.0 - type_one) +
                 worst_type_two * (1.0 - worst_type_two)) /
                static_cast<double>(reps));
  return est;
}

std::size_t raw_forwarding_bits(std::size_t d, std::size_t n) {
  const double counts_bits =
      static_cast<double>(d) * std::log2(static_cast<double>(n) + 1.0);
  const double labels_bits =
      static_cast<double>(n) * std::log2(static_cast<double>(d));
  return static_cast<std::size_t>(std::ceil(std::min(counts_bits, labels_bits)));
}

ProtocolSpec raw_forwarding_protocol(std::size_t d, std::size_t n,
                                     std::size_t m) {
  ProtocolSpec spec;
  spec.model = ModelKind::multinomial;
  spec.constraint = ConstraintKind::none;
  spec.aggregator = AggregatorKind::pooled_chi2;
  spec.d = d;
  spec.n = n;
  spec.m = m;
  spec.b = raw_forwarding_bits(d, n);
  spec.validate();
  return spec;
}

Transcript encode_counts_transcript(const CountVector& counts) {
  const std::size_t width =
      std::max<std::size_t>(1, clog2(static_cast<std::uint64_t>(counts.n) + 1));
  Transcript t;
  t.mode = TranscriptMode::bits;
  t.bits.reserve(width * counts.d());
  for (std::int64_t c : counts.counts) {
    for (std::size_t k = 0; k < width; ++k) {
      t.bits.push_back(static_cast<std::uint8_t>((c >> k) & 1));
    }
  }
  return t;
}

CountVector decode_counts_transcript(const Transcript& t, std::size_t d,
                                     std::int64_t n) {
  const std::size_t width = std::max<std::size_t>(
      1, clog2(static_cast<std::uint64_t>(n) + 1));
  if (t.bits.size() != width * d) {
    throw ValidationError("decode_counts_transcript: length mismatch");
  }
  std::vector<std::int64_t> counts(d, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k < width; ++k) {
      counts[i] |= static_cast<std::int64_t>(t.bits[i * width + k]) << k;
    }
  }
  return CountVector(std::move(counts), n);
}

}  // namespace distest
