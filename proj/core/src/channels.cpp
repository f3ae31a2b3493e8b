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

#include "distest/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "distest/rng.hpp"

namespace distest {

SharedRandomness SharedRandomness::make(std::uint64_t seed, std::size_t d,
                                        std::size_t rows) {
  if (d == 0) throw ValidationError("SharedRandomness: d must be positive");
  rows = std::min(rows, d);
  SharedRandomness out;
  out.seed = seed;
  out.d = d;
  out.rotation.reserve(rows);
  Rng rng(mix_seed(seed, 0x726f74ULL));
  // Gram-Schmidt on i.i.d. Gaussian rows; near-zero residuals are resampled.
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row;
    for (int attempt = 0; attempt < 64; ++attempt) {
      row = rng.normal_vector(d);
      for (const auto& prev : out.rotation) {
        const double dot =
            std::inner_product(row.begin(), row.end(), prev.begin(), 0.0);
        for (std::size_t i = 0; i < d; ++i) row[i] -= dot * prev[i];
      }
      // Re-orthogonalize once; plain Gram-Schmidt loses digits for large d.
      for (const auto& prev : out.rotation) {
        const double dot =
            std::inner_product(row.begin(), row.end(), prev.begin(), 0.0);
        for (std::size_t i = 0; i < d; ++i) row[i] -= dot * prev[i];
      }
      const double norm = std::sqrt(
          std::inner_product(row.begin(), row.end(), row.begin(), 0.0));
      if (norm > 1e-8) {
        for (double& x : row) x /= norm;
        break;
      }
      row.clear();
    }
    if (row.empty()) {
      throw std::runtime_error("SharedRandomness: orthogonalization failed");
    }
    out.rotation.push_back(std::move(row));
  }
  return out;
}

std::vector<double> SharedRandomness::apply(const std::vector<double>& v) const {
  if (v.size() != d) {
    throw ValidationError("SharedRandomness::apply: dimension mismatch");
  }
  std::vector<double> out(rotation.size());
  for (std::size_t r = 0; r < rotation.size(); ++r) {
    out[r] = std::inner_product(rotation[r].begin(), rotation[r].end(),
                                v.begin(), 0.0);
  }
  return out;
}

DpParams::DpParams(double eps, double del, double clip)
    : epsilon(eps), delta(del), clip_bound(clip) {
  if (!(eps > 0.0)) throw ValidationError("DpParams: epsilon must be > 0");
  if (del < 0.0 || del >= 1.0) {
    throw ValidationError("DpParams: delta must lie in [0, 1)");
  }
  if (!(clip > 0.0)) throw ValidationError("DpParams: clip_bound must be > 0");
}

double dp_noise_scale(const DpParams& p, std::size_t d) {
  const double dd = static_cast<double>(d);
  if (p.delta == 0.0) {
    return 2.0 * p.clip_bound * dd / p.epsilon;
  }
  return 2.0 * p.clip_bound * std::sqrt(dd) *
         std::sqrt(2.0 * std::log(1.25 / p.delta)) / p.epsilon;
}

std::vector<std::size_t> local_assignment(std::size_t d, std::size_t b,
                                          std::size_t server_id) {
  const std::size_t k = std::min(b, d);
  std::vector<std::size_t> idx(k);
  const std::size_t start = (server_id * b) % d;
  for (std::size_t i = 0; i < k; ++i) idx[i] = (start + i) % d;
  return idx;
}

Transcript quantize_local(const std::vector<double>& v, std::size_t b,
                          std::size_t server_id, std::size_t /*m*/) {
  if (b == 0) throw ValidationError("quantize_local: b must be positive");
  Transcript t;
  t.mode = TranscriptMode::bits;
  t.server_id = server_id;
  const auto idx = local_assignment(v.size(), b, server_id);
  t.bits.reserve(idx.size());
  for (std::size_t i : idx) {
    t.bits.push_back(v[i] >= 0.0 ? 1 : 0);
  }
  return t;
}

Transcript quantize_shared(const std::vector<double>& v, std::size_t b,
                           const SharedRandomness& shared,
                           std::size_t server_id) {
  if (b == 0) throw ValidationError("quantize_shared: b must be positive");
  const std::size_t k = std::min(b, shared.rotation.size());
  const auto rotated = shared.apply(v);
  Transcript t;
  t.mode = TranscriptMode::bits;
  t.server_id = server_id;
  t.bits.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    t.bits.push_back(rotated[i] >= 0.0 ? 1 : 0);
  }
  return t;
}

Transcript dp_mechanism(const std::vector<double>& v, const DpParams& p,
                        std::uint64_t seed, std::size_t server_id) {
  Transcript t;
  t.mode = TranscriptMode::dp;
  t.server_id = server_id;
  const double scale = dp_noise_scale(p, v.size());
  Rng rng(mix_seed(seed, 0x6470ULL, server_id));
  t.payload.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double clipped =
        std::clamp(v[i], -p.clip_bound, p.clip_bound);
    const double noise =
        (p.delta == 0.0) ? rng.laplace(scale) : scale * rng.normal();
    t.payload[i] = clipped + noise;
  }
  return t;
}

DpCertificate verify_dp(const DpParams& p, const std::vector<double>& x,
                        const std::vector<double>& x_prime,
                        std::size_t grid_points) {
  if (x.size() != x_prime.size()) {
    throw ValidationError("verify_dp: inputs must have equal dimension");
  }
  const std::size_t d = x.size();
  const double scale = dp_noise_scale(p, d);
  DpCertificate cert;
  cert.epsilon = p.epsilon;
  cert.delta = p.delta;
  cert.mechanism = (p.delta == 0.0) ? "laplace" : "gaussian";

  // Post-clip payloads.
  std::vector<double> a(d), bvec(d);
  for (std::size_t i = 0; i < d; ++i) {
    a[i] = std::clamp(x[i], -p.clip_bound, p.clip_bound);
    bvec[i] = std::clamp(x_prime[i], -p.clip_bound, p.clip_bound);
  }

  if (p.delta == 0.0) {
    // Product of Laplace ratios: log-ratio bounded by sum |a_i - b_i|/scale,
    // itself at most 2*clip*d/scale = epsilon.
    double l1 = 0.0;
    for (std::size_t i = 0; i < d; ++i) l1 += std::abs(a[i] - bvec[i]);
    cert.analytic_bound = std::exp(l1 / scale);
    // Grid scan of the worst coordinate's density ratio as a cross-check.
    double worst = 0.0;
    const double lo = -p.clip_bound - 4.0 * scale;
    const double hi = p.clip_bound + 4.0 * scale;
    double max_log_ratio = 0.0;
    for (std::size_t g = 0; g < grid_points; ++g) {
      const double z =
          lo + (hi - lo) * static_cast<double>(g) /
                   static_cast<double>(grid_points - 1);
      double log_ratio = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        log_ratio += (std::abs(z - bvec[i]) - std::abs(z - a[i])) / scale;
      }
      max_log_ratio = std::max(max_log_ratio, log_ratio);
    }
    worst = std::exp(max_log_ratio);
    cert.max_grid_ratio = worst;
    cert.certified = cert.analytic_bound <= std::exp(p.epsilon) * (1.0 + 1e-9) &&
                     worst <= cert.analytic_bound * (1.0 + 1e-9);
  } else {
    // Gaussian mechanism: sigma >= sqrt(2 ln(1.25/delta)) * Delta_2 / eps
    // with Delta_2 <= 2*clip*sqrt(d) certifies (eps, delta)-DP for eps <= 1.
    double l2sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      l2sq += (a[i] - bvec[i]) * (a[i] - bvec[i]);
    }
    const double sensitivity = std::sqrt(l2sq);
    const double required =
        std::sqrt(2.0 * std::log(1.25 / p.delta)) * sensitivity / p.epsilon;
    cert.analytic_bound = required;
    cert.max_grid_ratio = scale;
    cert.certified = scale >= required * (1.0 - 1e-12);
  }
  return cert;
}

std::uint64_t transcript_cardinality(const Transcript& t) {
  if (t.mode != TranscriptMode::bits) {
    throw ValidationError(
        "transcript_cardinality: only defined for bits-mode transcripts");
  }
  if (t.bits.size() > 63) {
    throw ValidationError(
        "transcript_cardinality: transcript longer than 63 bits");
  }
  return std::uint64_t{1} << t.bits.size();
}

std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits) {
  if (bits.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("pack_bits: too many bits");
  }
  const auto n = static_cast<std::uint32_t>(bits.size());
  std::vector<std::uint8_t> out(4 + (bits.size() + 7) / 8, 0);
  out[0] = static_cast<std::uint8_t>(n & 0xff);
  out[1] = static_cast<std::uint8_t>((n >> 8) & 0xff);
  out[2] = static_cast<std::uint8_t>((n >> 16) & 0xff);
  out[3] = static_cast<std::uint8_t>((n >> 24) & 0xff);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1) out[4 + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

std::vector<std::uint8_t> unpack_bits(
    const std::vector<std::uint8_t>& packed) {
  if (packed.size() < 4) throw ValidationError("unpack_bits: truncated input");
  const std::uint32_t n = static_cast<std::uint32_t>(packed[0]) |
                          (static_cast<std::uint32_t>(packed[1]) << 8) |
                          (static_cast<std::uint32_t>(packed[2]) << 16) |
                          (static_cast<std::uint32_t>(packed[3]) << 24);
  if (packed.size() != 4 + (static_cast<std::size_t>(n) + 7) / 8) {
    throw ValidationError("unpack_bits: length prefix mismatch");
  }
  std::vector<std::uint8_t> bits(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    bits[i] = (packed[4 + i / 8] >> (i % 8)) & 1;
  }
  return bits;
}

std::string bits_to_hex(const std::vector<std::uint8_t>& bits) {
  static const char* digits = "0123456789abcdef";
  const auto packed = pack_bits(bits);
  std::string out;
  out.reserve(2 * packed.size());
  for (std::uint8_t byte : packed) {
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0xf]);
  }
  return out;
}

}  // namespace distest
