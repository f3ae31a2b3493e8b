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

#ifndef DISTEST_CONFIG_HPP_
#define DISTEST_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "distest/protocols.hpp"
#include "distest/risk_lab.hpp"

namespace distest {

// Schema-validated experiment description; every field is echoed into the
// output metadata block. Unknown JSON keys are rejected by name.
struct ExperimentConfig {
  std::string command;  // calibrate | risk | sweep | equiv | noneq

  // Protocol description.
  std::string model = "multinomial";       // multinomial | gaussian
  std::string constraint = "none";         // none | bandwidth | dp
  std::string randomness = "shared";       // local | shared
  std::string aggregator = "pooled_chi2";
  std::size_t m = 8;
  std::size_t n = 64;
  std::size_t d = 8;
  std::size_t b = 0;
  double epsilon = 1.0;
  double delta = 0.0;
  double clip_multiplier = 1.0;
  double c_shift = kDefaultCountShift;

  // Panel / alternative geometry.
  double ratio_R = 2.0;
  double rho = 0.0;
  double rho_lo = 0.0;  // bisection bracket (0 = auto)
  double rho_hi = 0.0;
  std::string panel_construction = "dense_pm";  // dense_pm | prior_sampled
  std::size_t panel_size = 4;

  // Monte Carlo settings.
  double alpha = 0.05;
  double target_risk = 0.5;
  double tol = 0.05;
  std::size_t calibration_reps = 2000;
  std::size_t eval_reps = 2000;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;

  // Sweep settings.
  std::string sweep_param;         // m | n | b | epsilon
  std::vector<double> sweep_grid;
  bool synthetic = false;          // exact log-linear injection mode
  double synthetic_exponent = -1.0;

  // Equivalence-lab settings.
  std::string equiv_preset = "lemma-suite";  // lemma-suite | carter-direction
  std::size_t bins = 1024;
  std::string measure_p_json;  // optional inline measures for a TV row
  std::string measure_q_json;

  std::string out_path;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json() const;  // canonical key order
  void validate() const;
  std::string hash() const;  // FNV-1a over the canonical JSON
};

ProtocolSpec spec_from_config(const ExperimentConfig& cfg);
McSettings mc_from_config(const ExperimentConfig& cfg);
AlternativePanel panel_from_config(const ExperimentConfig& cfg, double rho);

}  // namespace distest

#endif  // DISTEST_CONFIG_HPP_
