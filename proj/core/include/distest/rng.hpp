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

#ifndef DISTEST_RNG_HPP_
#define DISTEST_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace distest {

// splitmix64 finalizer, used to derive independent seed streams from
// (experiment_seed, server_id, replicate_id, ...) tuples.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return mix_seed(a ^ (mix_seed(b) + 0x9e3779b97f4a7c15ULL));
}

template <typename... Rest>
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, Rest... rest) {
  return mix_seed(mix_seed(a, b), rest...);
}

// Deterministic random stream. All sampling goes through explicit
// formulas on top of mt19937_64 so that a (seed -> draw sequence)
// mapping is stable for a given build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double normal();
  double laplace(double scale);

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Exact Binomial(n, p) sample; inversion for small n*p, BTRS otherwise.
  std::int64_t binomial(std::int64_t n, double p);

  std::vector<double> normal_vector(std::size_t d);

 private:
  std::int64_t binomial_inversion(std::int64_t n, double p);
  std::int64_t binomial_btrs(std::int64_t n, double p);

  std::mt19937_64 gen_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace distest

#endif  // DISTEST_RNG_HPP_
