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

// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; run with a number argument to execute a single check,
// or with no arguments to execute all of them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "distest/channels.hpp"
#include "distest/equivalence_lab.hpp"
#include "distest/models.hpp"
#include "distest/protocols.hpp"
#include "distest/rng.hpp"
#include "distest/risk_lab.hpp"
#include "distest/transforms.hpp"

namespace distest {
namespace {

constexpr std::size_t kJobs = 8;

struct Outcome {
  bool pass = false;
  std::string detail;
};

FiniteMeasure random_measure(Rng& rng, std::size_t max_atoms) {
  const std::size_t k = 1 + rng.below(max_atoms);
  FiniteMeasure p;
  double mass = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    p.atoms.push_back(static_cast<double>(rng.below(12)));
    p.weights.push_back(rng.uniform_pos());
    mass += p.weights.back();
  }
  for (double& w : p.weights) w /= mass;
  return p;
}

FiniteMeasure on_alphabet(const FiniteMeasure& m,
                          const std::vector<double>& alphabet) {
  FiniteMeasure out;
  out.atoms = alphabet;
  out.weights.assign(alphabet.size(), 0.0);
  for (std::size_t i = 0; i < m.atoms.size(); ++i) {
    const auto it =
        std::lower_bound(alphabet.begin(), alphabet.end(), m.atoms[i]);
    out.weights[static_cast<std::size_t>(it - alphabet.begin())] +=
        m.weights[i];
  }
  return out;
}

// --- 1: exact lemma suite --------------------------------------------------

Outcome criterion_1() {
  Rng rng(1001);
  const double tol = 1e-12;
  std::size_t failures = 0;
  for (int t = 0; t < 200; ++t) {
    const FiniteMeasure a = random_measure(rng, 6);
    const FiniteMeasure b = random_measure(rng, 6);
    const FiniteMeasure c = random_measure(rng, 6);
    // TV metric identities.
    if (tv_exact(a, a) != 0.0) ++failures;
    if (tv_exact(a, b) != tv_exact(b, a)) ++failures;
    if (tv_exact(a, c) > tv_exact(a, b) + tv_exact(b, c) + tol) ++failures;
    // Data processing through a random binary kernel on a merged alphabet.
    std::vector<double> alphabet = a.atoms;
    alphabet.insert(alphabet.end(), b.atoms.begin(), b.atoms.end());
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()),
                   alphabet.end());
    KernelMatrix k;
    k.source_atoms = alphabet;
    k.target_atoms = {0.0, 1.0};
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      const double x = rng.uniform();
      k.rows.push_back({x, 1.0 - x});
    }
    if (!check_data_processing(on_alphabet(a, alphabet),
                               on_alphabet(b, alphabet), k)
             .holds) {
      ++failures;
    }
    // Product bound over 1-3 random factors.
    std::vector<std::pair<FiniteMeasure, FiniteMeasure>> pairs;
    for (std::size_t i = 0, f = 1 + rng.below(3); i < f; ++i) {
      pairs.emplace_back(random_measure(rng, 4), random_measure(rng, 4));
    }
    if (!check_product_bound(pairs).holds) ++failures;
    if (!hellinger_l1_check(a, b).holds) ++failures;
  }
  // Factorization: likelihood ratios depend on raw samples only through
  // their counts; 200 random (q, permutation) pairs at d=5, n=20.
  const std::size_t d = 5;
  const SimplexVector q0 = SimplexVector::uniform(d);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> w(d);
    double s = 0.0;
    for (double& x : w) {
      x = 0.5 + rng.uniform();
      s += x;
    }
    for (double& x : w) x /= s;
    w[d - 1] = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    const SimplexVector q(w);
    auto raw = sample_raw(q, 20, mix_seed(2001, t));
    auto permuted = raw;
    for (std::size_t i = permuted.size(); i > 1; --i) {
      std::swap(permuted[i - 1], permuted[rng.below(i)]);
    }
    if (!neyman_fisher_check(raw, permuted, q, q0)) ++failures;
  }
  std::ostringstream detail;
  detail << failures << " failures over 1000 randomized lemma checks";
  return {failures == 0, detail.str()};
}

// --- 2: maximal coupling ---------------------------------------------------

Outcome criterion_2() {
  Rng rng(2002);
  const int pairs = 50;
  const int samples = 100000;
  int bad = 0;
  double worst_gap_sigmas = 0.0;
  for (int t = 0; t < pairs; ++t) {
    const FiniteMeasure p = random_measure(rng, 8);
    const FiniteMeasure q = random_measure(rng, 8);
    const double tv = tv_exact(p, q);
    Rng sampler(mix_seed(3003, t));
    int mismatches = 0;
    for (int s = 0; s < samples; ++s) {
      const auto [x, y] = maximal_coupling(p, q, sampler);
      if (x != y) ++mismatches;
    }
    const double freq = static_cast<double>(mismatches) / samples;
    const double se =
        std::max(std::sqrt(tv * (1.0 - tv) / samples), 1.0 / samples);
    const double sigmas = std::fabs(freq - tv) / se;
    worst_gap_sigmas = std::max(worst_gap_sigmas, sigmas);
    if (sigmas > 3.0) ++bad;
  }
  std::ostringstream detail;
  detail << bad << "/" << pairs
         << " pairs outside 3 MC-stderr; worst gap = " << worst_gap_sigmas
         << " stderr units";
  return {bad == 0, detail.str()};
}

// --- 3: exhaustive protocol transfer bound ---------------------------------

Outcome criterion_3() {
  // Two-category model, m = 2 servers of n = 2 draws, b = 1 bit each.
  // Model P: counts of category 0, Binomial(2, q_f[0]); index 0 is null.
  std::vector<FiniteMeasure> model_p;
  model_p.push_back(binomial_measure(2, 0.5));
  model_p.push_back(binomial_measure(2, 0.8));
  // Model Q: the same family smeared toward the uniform distribution.
  const double t = 0.15;
  std::vector<FiniteMeasure> model_q;
  for (const FiniteMeasure& p : model_p) {
    FiniteMeasure q = p;
    for (double& w : q.weights) w = (1.0 - t) * w + t / 3.0;
    model_q.push_back(q);
  }
  // C: smoothing kernel from Q-atoms back onto P-atoms.
  KernelMatrix c;
  c.source_atoms = {0.0, 1.0, 2.0};
  c.target_atoms = {0.0, 1.0, 2.0};
  c.rows = {{0.9, 0.05, 0.05}, {0.05, 0.9, 0.05}, {0.05, 0.05, 0.9}};
  // One-bit channels with finite likelihood ratios (DP-certifiable).
  KernelMatrix channel;
  channel.source_atoms = {0.0, 1.0, 2.0};
  channel.target_atoms = {0.0, 1.0};
  channel.rows = {{0.85, 0.15}, {0.5, 0.5}, {0.15, 0.85}};
  const auto test = [](const std::vector<std::size_t>& bits) {
    return (bits[0] + bits[1] >= 2) ? 1 : 0;
  };
  const double channel_eps = std::log(0.85 / 0.15);
  const TransferReport r = protocol_transfer(
      model_p, model_q, c, {channel, channel}, 1, test, channel_eps);
  // Independent oracle for the bound: m * sup_f TV(Q_f C, P_f).
  double sup_tv = 0.0;
  for (std::size_t f = 0; f < model_p.size(); ++f) {
    sup_tv = std::max(sup_tv, tv_exact(apply_kernel(model_q[f], c),
                                       model_p[f]));
  }
  const double oracle_bound = 2.0 * sup_tv;
  const bool bound_matches = std::fabs(oracle_bound - r.bound) <= 1e-12;
  const bool ok = r.gap_holds && r.bit_budget_holds && r.dp_certified &&
                  bound_matches && std::fabs(r.gap) <= r.bound + 1e-15;
  std::ostringstream detail;
  detail << "|gap| = " << std::fabs(r.gap) << " <= bound " << r.bound
         << "; budget ok = " << r.bit_budget_holds
         << "; dp ok = " << r.dp_certified
         << "; oracle bound match = " << bound_matches;
  return {ok, detail.str()};
}

// --- 4: calibration honesty ------------------------------------------------

Outcome criterion_4() {
  const double alpha = 0.05;
  const std::size_t reps = 10000;
  std::vector<std::pair<std::string, ProtocolSpec>> presets;
  {
    ProtocolSpec s;
    s.model = ModelKind::multinomial;
    s.constraint = ConstraintKind::none;
    s.aggregator = AggregatorKind::pooled_chi2;
    s.m = 4;
    s.n = 32;
    s.d = 8;
    s.shared_seed = 41;
    presets.emplace_back("pooled_chi2", s);
  }
  {
    ProtocolSpec s;
    s.model = ModelKind::gaussian;
    s.constraint = ConstraintKind::bandwidth;
    s.randomness = RandomnessKind::shared;
    s.aggregator = AggregatorKind::sum_of_bits;
    s.m = 8;
    s.n = 16;
    s.d = 8;
    s.b = 4;
    s.shared_seed = 42;
    presets.emplace_back("shared_sign_bits", s);
  }
  {
    ProtocolSpec s;
    s.model = ModelKind::gaussian;
    s.constraint = ConstraintKind::bandwidth;
    s.randomness = RandomnessKind::local;
    s.aggregator = AggregatorKind::chi2_bit;
    // The statistic is a sum of m bits; m = 256 keeps the discreteness of
    // the achievable levels well below the 0.03-0.07 acceptance window.
    s.m = 256;
    s.n = 16;
    s.d = 8;
    s.b = 1;
    s.shared_seed = 43;
    presets.emplace_back("chi2_bit", s);
  }
  {
    ProtocolSpec s;
    s.model = ModelKind::gaussian;
    s.constraint = ConstraintKind::dp;
    s.randomness = RandomnessKind::shared;
    s.aggregator = AggregatorKind::dp_scalar_proj;
    s.m = 16;
    s.n = 16;
    s.d = 8;
    s.dp = DpParams(1.0, 0.0, 1.0);
    s.shared_seed = 44;
    presets.emplace_back("dp_scalar_proj", s);
  }
  bool all_ok = true;
  std::ostringstream detail;
  for (const auto& [name, spec] : presets) {
    const ProtocolSpec cal = calibrate(spec, alpha, reps, 4001, kJobs);
    const ProtocolRunner runner(cal);
    const Truth null = runner.null_truth();
    std::vector<int> rejections(reps, 0);
    parallel_for(reps, kJobs, [&](std::size_t r) {
      rejections[r] = runner.run_once(null, mix_seed(4002, r));
    });
    const double rate =
        std::accumulate(rejections.begin(), rejections.end(), 0) /
        static_cast<double>(reps);
    const bool ok = rate >= 0.03 && rate <= 0.07;
    all_ok = all_ok && ok;
    detail << name << " type I = " << rate << (ok ? " ok; " : " BAD; ");
  }
  return {all_ok, detail.str()};
}

// --- shared sweep helper ---------------------------------------------------

McSettings sweep_settings(std::uint64_t seed) {
  McSettings mc;
  mc.alpha = 0.25;
  mc.calibration_reps = 2000;
  mc.eval_reps = 1200;
  mc.panel_size = 4;
  mc.ratio_R = 2.0;
  mc.tol = 0.03;
  mc.seed = seed;
  mc.jobs = kJobs;
  return mc;
}

RateFit sweep_fit(const std::vector<ProtocolSpec>& specs,
                  const std::vector<double>& params,
                  std::pair<double, double> bracket,
                  const std::string& name, const McSettings& mc) {
  const std::vector<std::pair<double, double>> brackets(specs.size(),
                                                        bracket);
  const SweepResult sweep =
      sweep_rho_star(specs, params, brackets, name, 0.5, mc);
  std::vector<double> rho_sq;
  for (const SweepPoint& p : sweep.points) {
    rho_sq.push_back(p.estimate.rho_star * p.estimate.rho_star);
  }
  return fit_exponent(params, rho_sq, name);
}

// --- 5: pooled rate exponents ----------------------------------------------

Outcome criterion_5() {
  auto make_spec = [](std::size_t m, std::size_t n) {
    ProtocolSpec s;
    s.model = ModelKind::multinomial;
    s.constraint = ConstraintKind::none;
    s.aggregator = AggregatorKind::pooled_chi2;
    s.m = m;
    s.n = n;
    s.d = 8;
    s.shared_seed = 51;
    return s;
  };
  std::vector<ProtocolSpec> m_specs;
  std::vector<double> m_grid;
  for (std::size_t m : {2, 4, 8, 16, 32}) {
    m_specs.push_back(make_spec(m, 64));
    m_grid.push_back(static_cast<double>(m));
  }
  const RateFit m_fit =
      sweep_fit(m_specs, m_grid, {0.01, 0.9}, "m", sweep_settings(5001));
  std::vector<ProtocolSpec> n_specs;
  std::vector<double> n_grid;
  for (std::size_t n : {16, 32, 64, 128, 256}) {
    n_specs.push_back(make_spec(8, n));
    n_grid.push_back(static_cast<double>(n));
  }
  const RateFit n_fit =
      sweep_fit(n_specs, n_grid, {0.01, 0.9}, "n", sweep_settings(5002));
  const bool ok = std::fabs(m_fit.exponent + 1.0) <= 0.15 &&
                  std::fabs(n_fit.exponent + 1.0) <= 0.15;
  std::ostringstream detail;
  detail << "m-exponent = " << m_fit.exponent
         << ", n-exponent = " << n_fit.exponent << " (target -1.0 +/- 0.15)";
  return {ok, detail.str()};
}

// --- 6: bandwidth branch exponents -----------------------------------------

Outcome criterion_6() {
  // One-bit protocol: m-sweep of the chi-square sign bit.
  std::vector<ProtocolSpec> m_specs;
  std::vector<double> m_grid;
  for (std::size_t m : {8, 16, 32, 64, 128}) {
    ProtocolSpec s;
    s.model = ModelKind::gaussian;
    s.constraint = ConstraintKind::bandwidth;
    s.randomness = RandomnessKind::local;
    s.aggregator = AggregatorKind::chi2_bit;
    s.m = m;
    s.n = 32;
    s.d = 8;
    s.b = 1;
    s.shared_seed = 61;
    m_specs.push_back(s);
    m_grid.push_back(static_cast<double>(m));
  }
  const RateFit m_fit =
      sweep_fit(m_specs, m_grid, {0.005, 2.0}, "m", sweep_settings(6001));
  // b-sweep of the shared-rotation sign protocol at d = 128. The sweep
  // stays at b >= 8: with very few kept directions the risk is dominated
  // by the unlucky tail of the public-coin rotation draw (the worst panel
  // member projects onto almost nothing), which inflates rho* at b = 1, 2
  // and contaminates the slope estimate.
  std::vector<ProtocolSpec> low_specs, high_specs;
  std::vector<double> low_grid, high_grid;
  for (std::size_t b : {8, 16, 32, 64, 128, 192, 256, 384}) {
    ProtocolSpec s;
    s.model = ModelKind::gaussian;
    s.constraint = ConstraintKind::bandwidth;
    s.randomness = RandomnessKind::shared;
    s.aggregator = AggregatorKind::sum_of_bits;
    s.m = 64;
    s.n = 32;
    s.d = 128;
    s.b = b;
    s.shared_seed = 62;
    if (b < 128) {
      low_specs.push_back(s);
      low_grid.push_back(static_cast<double>(b));
    } else {
      high_specs.push_back(s);
      high_grid.push_back(static_cast<double>(b));
    }
  }
  const RateFit low_fit =
      sweep_fit(low_specs, low_grid, {0.02, 0.8}, "b", sweep_settings(6002));
  const RateFit high_fit = sweep_fit(high_specs, high_grid, {0.02, 0.8},
                                     "b", sweep_settings(6003));
  const bool ok = std::fabs(m_fit.exponent + 0.5) <= 0.15 &&
                  std::fabs(low_fit.exponent + 0.5) <= 0.15 &&
                  std::fabs(high_fit.exponent) < 0.15;
  std::ostringstream detail;
  detail << "1-bit m-exponent = " << m_fit.exponent
         << " (target -0.5 +/- 0.15); b-slope below d = " << low_fit.exponent
         << " (target -0.5 +/- 0.15); b-slope at/above d = "
         << high_fit.exponent << " (target |.| < 0.15)";
  return {ok, detail.str()};
}

// --- 7: privacy branch exponents -------------------------------------------

Outcome criterion_7() {
  // A scalar eps-DP transcript carries at most ~eps^2 bits of test signal
  // per server, so resolving both branches inside (n^{-1/4}, 1] needs many
  // servers; m is the dominant cost knob here.
  const std::size_t m = 1280, n = 32768, d = 32;
  const std::vector<double> grid{0.2, 0.26, 0.34, 0.45, 0.58, 0.7, 0.85, 1.0};
  McSettings mc = sweep_settings(7001);
  mc.eval_reps = 600;
  mc.panel_size = 2;
  mc.tol = 0.06;
  const DpPhaseResult r = dp_phase_sweep(m, n, d, grid, 0.0, mc);
  const double ratio = r.boundary_epsilon / r.predicted_boundary;
  const bool ok = std::fabs(r.slope_high.exponent + 2.0) <= 0.3 &&
                  std::fabs(r.slope_low.exponent + 1.0) <= 0.3 &&
                  ratio >= 0.5 && ratio <= 2.0;
  std::ostringstream detail;
  detail << "high-eps slope = " << r.slope_high.exponent
         << " (target -2 +/- 0.3); low-eps slope = " << r.slope_low.exponent
         << " (target -1 +/- 0.3); boundary = " << r.boundary_epsilon
         << " vs predicted " << r.predicted_boundary << " (ratio " << ratio
         << ")";
  return {ok, detail.str()};
}

// --- 8: DP certificates ----------------------------------------------------

Outcome criterion_8() {
  Rng rng(8008);
  std::size_t checked = 0, certified = 0;
  for (double eps : {0.1, 0.5, 1.0}) {
    for (double delta : {0.0, 1e-6, 1e-4}) {
      for (double clip : {0.5, 1.0, 2.0}) {
        for (std::size_t d : {1, 4, 16}) {
          const DpParams p(eps, delta, clip);
          std::vector<double> x(d), xp(d);
          for (std::size_t i = 0; i < d; ++i) {
            x[i] = 4.0 * (rng.uniform() - 0.5);
            xp[i] = 4.0 * (rng.uniform() - 0.5);
          }
          const DpCertificate cert = verify_dp(p, x, xp);
          ++checked;
          bool ok = cert.certified;
          if (delta == 0.0) {
            // The grid scan must fall within the analytic sup exactly
            // (tolerance 1e-12 in relative terms).
            ok = ok && cert.max_grid_ratio <=
                           cert.analytic_bound * (1.0 + 1e-12);
          }
          if (ok) ++certified;
        }
      }
    }
  }
  std::ostringstream detail;
  detail << certified << "/" << checked
         << " mechanism configurations certified";
  return {certified == checked, detail.str()};
}

// --- 9: root-transform deficiency ------------------------------------------

Outcome criterion_9() {
  const CarterDirectionReport r = carter_direction_check(
      {16, 64, 256}, {0.35, 0.45, 0.5, 0.55, 0.65}, 1024,
      kDefaultCountShift);
  const bool ok = r.strictly_decreasing && r.deficiency.back() < 0.1;
  std::ostringstream detail;
  detail << "deficiency(n=16,64,256) = " << r.deficiency[0] << ", "
         << r.deficiency[1] << ", " << r.deficiency[2]
         << "; strictly decreasing = " << r.strictly_decreasing
         << "; final < 0.1 = " << (r.deficiency.back() < 0.1);
  return {ok, detail.str()};
}

// --- 10: operational separation demo ----------------------------------------

Outcome criterion_10() {
  McSettings mc = sweep_settings(10001);
  mc.calibration_reps = 2000;
  mc.eval_reps = 1500;
  const NoneqReport r = nonequivalence_demo(4096, 8, 4, mc);
  const bool ok = r.scenario_ok && r.raw_below_one_third &&
                  r.gaussians_above_two_thirds;
  std::ostringstream detail;
  detail << "b = " << r.b << ", m*b = " << r.total_bits << " <= d = " << r.d
         << "; raw risk = " << r.raw_forwarding_risk.risk << " (< 1/3: "
         << r.raw_below_one_third << ");";
  for (const NoneqProtocolRisk& g : r.gaussian_risks) {
    detail << " " << g.name << " risk = " << g.risk.risk << ";";
  }
  detail << " all > 2/3: " << r.gaussians_above_two_thirds
         << " (lower bound over the implemented family only)";
  return {ok, detail.str()};
}

// --- 11: determinism across parallelism degrees ------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion_11() {
#ifndef DISTEST_CLI_PATH
  return {false, "CLI path not configured"};
#else
  const std::string cli = DISTEST_CLI_PATH;
  struct Job {
    std::string name;
    std::string command;
    std::string config;
  };
  const std::vector<Job> jobs = {
      {"calibrate", "calibrate",
       R"({"command":"calibrate","m":2,"n":16,"d":4,"alpha":0.1,
           "calibration_reps":1000,"eval_reps":500,"seed":3})"},
      {"risk", "risk",
       R"({"command":"risk","m":4,"n":32,"d":8,"rho":0.3,"alpha":0.1,
           "calibration_reps":1000,"eval_reps":500,"seed":5})"},
      {"sweep", "sweep",
       R"({"command":"sweep","sweep_param":"m","sweep_grid":[2,4,8,16],
           "synthetic":true,"synthetic_exponent":-1.0,"seed":7})"},
      {"equiv", "equiv",
       R"({"command":"equiv","equiv_preset":"carter-direction","seed":9})"},
      {"noneq", "noneq",
       R"({"command":"noneq","d":1024,"n":4,"m":2,"calibration_reps":400,
           "eval_reps":200,"seed":11})"},
  };
  bool all_ok = true;
  std::ostringstream detail;
  for (const Job& job : jobs) {
    const std::string cfg = "accept11_" + job.name + ".json";
    std::ofstream(cfg, std::ios::binary) << job.config;
    std::vector<std::string> outputs;
    for (const std::string jobs_flag : {"1", "8", "1"}) {
      const std::string out =
          "accept11_" + job.name + "_j" + jobs_flag + "_" +
          std::to_string(outputs.size()) + ".csv";
      const std::string cmd = cli + " " + job.command + " --config " + cfg +
                              " --out " + out + " --jobs " + jobs_flag +
                              " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        all_ok = false;
        detail << job.name << " run failed; ";
        break;
      }
      outputs.push_back(slurp(out));
    }
    const bool ok = outputs.size() == 3 && !outputs[0].empty() &&
                    outputs[0] == outputs[1] && outputs[0] == outputs[2];
    all_ok = all_ok && ok;
    detail << job.name << (ok ? " byte-identical; " : " MISMATCH; ");
  }
  return {all_ok, detail.str()};
#endif
}

using CriterionFn = Outcome (*)();

struct Criterion {
  int number;
  const char* title;
  CriterionFn fn;
};

const Criterion kCriteria[] = {
    {1, "lemma suite exactness", criterion_1},
    {2, "maximal coupling mismatch frequency", criterion_2},
    {3, "protocol transfer bound (exhaustive)", criterion_3},
    {4, "calibration type I honesty", criterion_4},
    {5, "pooled rate exponents", criterion_5},
    {6, "bandwidth branch exponents", criterion_6},
    {7, "privacy branch exponents", criterion_7},
    {8, "DP mechanism certificates", criterion_8},
    {9, "root-transform deficiency decay", criterion_9},
    {10, "operational separation demo", criterion_10},
    {11, "determinism across parallelism", criterion_11},
};

}  // namespace
}  // namespace distest

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  int failures = 0;
  for (const auto& c : distest::kCriteria) {
    if (only != 0 && c.number != only) continue;
    distest::Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d (%s): %s -- %s\n", c.number, c.title,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
