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

#ifndef DISTEST_CHANNELS_HPP_
#define DISTEST_CHANNELS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "distest/models.hpp"

namespace distest {

enum class TranscriptMode { bits, dp };

// The message one server sends to the central node: a bit string of
// length <= b, or a DP-noised real vector.
struct Transcript {
  TranscriptMode mode = TranscriptMode::bits;
  std::vector<std::uint8_t> bits;   // one entry per bit, values 0/1
  std::vector<double> payload;      // dp mode
  std::size_t server_id = 0;
};

// Seed-derived orthogonal rotation shared by all servers. Only the first
// `rows` rows are materialized; they are orthonormal within 1e-9.
struct SharedRandomness {
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::vector<std::vector<double>> rotation;  // rows x d

  static SharedRandomness make(std::uint64_t seed, std::size_t d,
                               std::size_t rows);
  std::vector<double> apply(const std::vector<double>& v) const;
};

struct DpParams {
  double epsilon = 1.0;
  double delta = 0.0;
  double clip_bound = 1.0;

  DpParams() = default;
  DpParams(double eps, double del, double clip);
  // The paper's regime is epsilon <= 1; larger values are legal but flagged.
  bool in_paper_regime() const { return epsilon <= 1.0; }
};

// Noise scale of the mechanism for a d-dimensional clipped payload.
// delta = 0: two-sided exponential, scale 2*clip*d/eps (L1 diameter).
// delta > 0: Gaussian, scale 2*clip*sqrt(d)*sqrt(2 ln(1.25/delta))/eps.
// Sensitivity is the full post-clip domain diameter: the privacy
// constraint quantifies over arbitrary local samples x, x', not
// neighboring records.
double dp_noise_scale(const DpParams& p, std::size_t d);

// Sign bits of coordinates ((j*b mod d), ...) round-robin, min(b,d) bits.
// The published decoding map is sign -> +/-1 at the covered coordinate.
Transcript quantize_local(const std::vector<double>& v, std::size_t b,
                          std::size_t server_id, std::size_t m);

// Coordinates covered by quantize_local for a given server.
std::vector<std::size_t> local_assignment(std::size_t d, std::size_t b,
                                          std::size_t server_id);

// Sign bits of the first min(b,d) coordinates of rotation * v; the
// rotation is common to all servers. sign(0) := +1.
Transcript quantize_shared(const std::vector<double>& v, std::size_t b,
                           const SharedRandomness& shared,
                           std::size_t server_id);

Transcript dp_mechanism(const std::vector<double>& v, const DpParams& p,
                        std::uint64_t seed, std::size_t server_id = 0);

struct DpCertificate {
  bool certified = false;
  double epsilon = 0.0;
  double delta = 0.0;
  double max_grid_ratio = 0.0;  // max density ratio observed on the grid
  double analytic_bound = 0.0;  // closed-form sup of the ratio
  std::string mechanism;
};

// Analytic (epsilon, delta) certificate for the implemented mechanisms,
// cross-checked against a density-ratio grid scan for delta = 0.
DpCertificate verify_dp(const DpParams& p, const std::vector<double>& x,
                        const std::vector<double>& x_prime,
                        std::size_t grid_points = 1000);

// Number of distinct values a bits-mode transcript can take.
std::uint64_t transcript_cardinality(const Transcript& t);

// Little-endian packed bit serialization with a 32-bit length prefix.
std::vector<std::uint8_t> pack_bits(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> unpack_bits(const std::vector<std::uint8_t>& packed);
std::string bits_to_hex(const std::vector<std::uint8_t>& bits);

}  // namespace distest

#endif  // DISTEST_CHANNELS_HPP_
