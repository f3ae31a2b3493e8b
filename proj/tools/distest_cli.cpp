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

// Experiment runner. Subcommands: calibrate, risk, sweep, equiv, noneq.
// Exit codes: 0 success, 2 config/validation error, 3 regime refusal,
// 4 numerical failure (bisection bracket).

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "distest/channels.hpp"
#include "distest/config.hpp"
#include "distest/csv.hpp"
#include "distest/equivalence_lab.hpp"
#include "distest/models.hpp"
#include "distest/protocols.hpp"
#include "distest/risk_lab.hpp"
#include "distest/rng.hpp"
#include "distest/transforms.hpp"

namespace {

using namespace distest;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRegime = 3;
constexpr int kExitNumerical = 4;

void emit_metadata(CsvWriter& csv, const ExperimentConfig& cfg) {
  csv.metadata("schema_version", kCsvSchemaVersion);
  csv.metadata("config_hash", cfg.hash());
  csv.metadata("seed", CsvWriter::fmt(static_cast<std::uint64_t>(cfg.seed)));
  csv.metadata("command", cfg.command);
  csv.metadata("config", cfg.to_json());
}

CsvWriter cmd_calibrate(const ExperimentConfig& cfg) {
  const ProtocolSpec spec = spec_from_config(cfg);
  const ProtocolSpec calibrated =
      calibrate(spec, cfg.alpha, cfg.calibration_reps, cfg.seed, cfg.jobs);

  // Null-statistic quantiles from an independent stream.
  const ProtocolRunner runner(spec);
  const Truth null = runner.null_truth();
  std::vector<double> stats(cfg.calibration_reps);
  parallel_for(cfg.calibration_reps, cfg.jobs, [&](std::size_t r) {
    stats[r] = runner.statistic(null, mix_seed(cfg.seed, 0x9000ULL, r));
  });
  std::sort(stats.begin(), stats.end());

  // Fresh type I estimate at the calibrated threshold.
  const ProtocolRunner cal_runner(calibrated);
  std::vector<std::uint8_t> rejects(cfg.eval_reps);
  parallel_for(cfg.eval_reps, cfg.jobs, [&](std::size_t r) {
    rejects[r] = static_cast<std::uint8_t>(
        cal_runner.run_once(null, mix_seed(cfg.seed, 0x9001ULL, r)));
  });
  const double type_one =
      static_cast<double>(
          std::accumulate(rejects.begin(), rejects.end(), 0)) /
      static_cast<double>(cfg.eval_reps);
  const double stderr_ = std::sqrt(type_one * (1.0 - type_one) /
                                   static_cast<double>(cfg.eval_reps));

  CsvWriter csv;
  emit_metadata(csv, cfg);
  csv.header({"metric", "value", "mc_stderr"});
  csv.row({"threshold", CsvWriter::fmt(calibrated.threshold), "0"});
  for (double p : {0.5, 0.75, 0.9, 0.95, 0.99}) {
    const auto idx = std::min<std::size_t>(
        stats.size() - 1,
        static_cast<std::size_t>(
            std::ceil(p * static_cast<double>(stats.size()))));
    csv.row({"null_quantile_" + CsvWriter::fmt(p),
             CsvWriter::fmt(stats[idx]), "0"});
  }
  csv.row({"type_one", CsvWriter::fmt(type_one), CsvWriter::fmt(stderr_)});
  csv.row({"type_one_ci_lo", CsvWriter::fmt(type_one - 3.0 * stderr_), "0"});
  csv.row({"type_one_ci_hi", CsvWriter::fmt(type_one + 3.0 * stderr_), "0"});
  return csv;
}

CsvWriter cmd_risk(const ExperimentConfig& cfg) {
  const ProtocolSpec spec = spec_from_config(cfg);
  const ProtocolSpec calibrated =
      calibrate(spec, cfg.alpha, cfg.calibration_reps, cfg.seed, cfg.jobs);
  const AlternativePanel panel = panel_from_config(cfg, cfg.rho);
  const RiskEstimate est = testing_risk(calibrated, panel, cfg.eval_reps,
                                        mix_seed(cfg.seed, 0x9002ULL),
                                        cfg.jobs);
  const bool dp_regime_warning =
      cfg.constraint == "dp" &&
      cfg.epsilon <= std::pow(static_cast<double>(cfg.n), -0.25);

  CsvWriter csv;
  emit_metadata(csv, cfg);
  csv.header({"metric", "value", "mc_stderr", "dp_regime_warning"});
  const std::string warn = dp_regime_warning ? "1" : "0";
  csv.row({"type_one", CsvWriter::fmt(est.type_one), "0", warn});
  csv.row({"worst_type_two", CsvWriter::fmt(est.worst_type_two), "0", warn});
  csv.row({"panel_risk", CsvWriter::fmt(est.risk),
           CsvWriter::fmt(est.mc_stderr), warn});
  return csv;
}

CsvWriter cmd_sweep(const ExperimentConfig& cfg) {
  CsvWriter csv;
  emit_metadata(csv, cfg);
  csv.header({"section", "param", "value", "extra"});

  if (cfg.synthetic) {
    // Exact log-linear injection: the fitted exponent must be recovered.
    std::vector<double> rho_sq;
    for (double p : cfg.sweep_grid) {
      rho_sq.push_back(0.37 * std::pow(p, cfg.synthetic_exponent));
    }
    const RateFit fit = fit_exponent(cfg.sweep_grid, rho_sq, "synthetic");
    for (std::size_t i = 0; i < cfg.sweep_grid.size(); ++i) {
      csv.row({"point", CsvWriter::fmt(cfg.sweep_grid[i]),
               CsvWriter::fmt(rho_sq[i]), ""});
    }
    csv.row({"fit_exponent", "synthetic", CsvWriter::fmt(fit.exponent),
             CsvWriter::fmt(fit.stderr_)});
    return csv;
  }

  const McSettings mc = mc_from_config(cfg);
  if (cfg.sweep_param == "epsilon") {
    const DpPhaseResult phase =
        dp_phase_sweep(cfg.m, cfg.n, cfg.d, cfg.sweep_grid, cfg.delta, mc);
    for (std::size_t i = 0; i < cfg.sweep_grid.size(); ++i) {
      csv.row({"projection_rho_star", CsvWriter::fmt(cfg.sweep_grid[i]),
               CsvWriter::fmt(phase.projection.points[i].estimate.rho_star),
               ""});
      csv.row({"scalar_chi2_rho_star", CsvWriter::fmt(cfg.sweep_grid[i]),
               CsvWriter::fmt(phase.scalar_chi2.points[i].estimate.rho_star),
               ""});
      csv.row({"min_rho_star_sq", CsvWriter::fmt(cfg.sweep_grid[i]),
               CsvWriter::fmt(phase.min_rho_star_sq[i]), ""});
    }
    csv.row({"fit_exponent", "epsilon_high_branch",
             CsvWriter::fmt(phase.slope_high.exponent),
             CsvWriter::fmt(phase.slope_high.stderr_)});
    csv.row({"fit_exponent", "epsilon_low_branch",
             CsvWriter::fmt(phase.slope_low.exponent),
             CsvWriter::fmt(phase.slope_low.stderr_)});
    csv.row({"boundary_epsilon", "estimate",
             CsvWriter::fmt(phase.boundary_epsilon), ""});
    csv.row({"boundary_epsilon", "predicted",
             CsvWriter::fmt(phase.predicted_boundary), ""});
    return csv;
  }

  std::vector<ProtocolSpec> specs;
  std::vector<std::pair<double, double>> brackets;
  const double lo = cfg.rho_lo > 0.0 ? cfg.rho_lo : 0.01;
  const double hi = cfg.rho_hi > 0.0 ? cfg.rho_hi : 0.6;
  for (double p : cfg.sweep_grid) {
    ProtocolSpec spec = spec_from_config(cfg);
    const auto v = static_cast<std::size_t>(p);
    if (cfg.sweep_param == "m") {
      spec.m = v;
    } else if (cfg.sweep_param == "n") {
      spec.n = v;
    } else {
      spec.b = v;
    }
    spec.validate();
    specs.push_back(std::move(spec));
    brackets.emplace_back(lo, hi);
  }
  const SweepResult sweep = sweep_rho_star(
      specs, cfg.sweep_grid, brackets, cfg.sweep_param, cfg.target_risk, mc);
  std::vector<double> rho_sq;
  for (const auto& point : sweep.points) {
    rho_sq.push_back(point.estimate.rho_star * point.estimate.rho_star);
    csv.row({"rho_star", CsvWriter::fmt(point.param),
             CsvWriter::fmt(point.estimate.rho_star),
             CsvWriter::fmt(
                 static_cast<std::uint64_t>(point.estimate.iterations))});
  }
  const RateFit fit = fit_exponent(cfg.sweep_grid, rho_sq, cfg.sweep_param);
  csv.row({"fit_exponent", cfg.sweep_param, CsvWriter::fmt(fit.exponent),
           CsvWriter::fmt(fit.stderr_)});
  if (cfg.sweep_param == "b") {
    const ElbowFit elbow = detect_elbow(cfg.sweep_grid, rho_sq);
    csv.row({"elbow_b", "estimate", CsvWriter::fmt(elbow.elbow), ""});
    csv.row({"elbow_slope_low", "fit", CsvWriter::fmt(elbow.slope_low), ""});
    csv.row({"elbow_slope_high", "fit", CsvWriter::fmt(elbow.slope_high), ""});
  }
  return csv;
}

void random_measure(Rng& rng, std::size_t atoms, FiniteMeasure* out) {
  out->atoms.clear();
  out->weights.clear();
  double mass = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    out->atoms.push_back(static_cast<double>(i));
    out->weights.push_back(rng.uniform_pos());
    mass += out->weights.back();
  }
  for (double& w : out->weights) w /= mass;
}

CsvWriter cmd_equiv(const ExperimentConfig& cfg) {
  CsvWriter csv;
  emit_metadata(csv, cfg);
  csv.header({"check", "value", "bound", "holds"});

  if (cfg.equiv_preset == "custom-tv") {
    const FiniteMeasure p = FiniteMeasure::from_json(cfg.measure_p_json);
    const FiniteMeasure q = FiniteMeasure::from_json(cfg.measure_q_json);
    csv.row({"tv_exact", CsvWriter::fmt(tv_exact(p, q)), "", "1"});
    return csv;
  }

  if (cfg.equiv_preset == "carter-direction") {
    const std::vector<double> q_grid = {0.35, 0.45, 0.5, 0.55, 0.65};
    const CarterDirectionReport report = carter_direction_check(
        {16, 64, 256}, q_grid, cfg.bins, cfg.c_shift);
    for (std::size_t i = 0; i < report.n_values.size(); ++i) {
      csv.row({"deficiency_upper_n" +
                   CsvWriter::fmt(
                       static_cast<std::uint64_t>(report.n_values[i])),
               CsvWriter::fmt(report.deficiency[i]),
               CsvWriter::fmt(report.discretization_error[i]),
               report.strictly_decreasing ? "1" : "0"});
    }
    return csv;
  }

  // lemma-suite: randomized exact property checks, one summary row each.
  Rng rng(mix_seed(cfg.seed, 0x1e44aULL));
  const auto add = [&csv](const std::string& name, double value, double bound,
                          bool holds) {
    csv.row({name, CsvWriter::fmt(value), CsvWriter::fmt(bound),
             holds ? "1" : "0"});
  };

  bool dp_ok = true, prod_ok = true, hell_ok = true, tri_ok = true;
  for (int trial = 0; trial < 200; ++trial) {
    FiniteMeasure p, q, r;
    const std::size_t atoms = 2 + rng.below(5);
    random_measure(rng, atoms, &p);
    random_measure(rng, atoms, &q);
    random_measure(rng, atoms, &r);
    KernelMatrix k;
    k.source_atoms = p.atoms;
    k.target_atoms = {0.0, 1.0, 2.0};
    for (std::size_t i = 0; i < atoms; ++i) {
      FiniteMeasure row;
      random_measure(rng, 3, &row);
      k.rows.push_back(row.weights);
    }
    dp_ok = dp_ok && check_data_processing(p, q, k).holds;
    prod_ok = prod_ok && check_product_bound({{p, q}, {q, r}, {p, r}}).holds;
    hell_ok = hell_ok && hellinger_l1_check(p, q).holds;
    tri_ok = tri_ok &&
             tv_exact(p, r) <= tv_exact(p, q) + tv_exact(q, r) + 1e-12;
  }
  add("data_processing_200", dp_ok ? 1 : 0, 1, dp_ok);
  add("product_bound_200", prod_ok ? 1 : 0, 1, prod_ok);
  add("hellinger_l1_200", hell_ok ? 1 : 0, 1, hell_ok);
  add("tv_triangle_200", tri_ok ? 1 : 0, 1, tri_ok);

  // Maximal coupling mismatch frequency vs exact TV on a Bernoulli pair.
  {
    FiniteMeasure p, q;
    p.atoms = {0.0, 1.0};
    p.weights = {0.5, 0.5};
    q.atoms = {0.0, 1.0};
    q.weights = {0.25, 0.75};
    const double tv = tv_exact(p, q);
    std::size_t mism = 0;
    const std::size_t reps = 100000;
    for (std::size_t i = 0; i < reps; ++i) {
      const auto [x, y] = maximal_coupling(p, q, rng);
      if (x != y) ++mism;
    }
    const double freq = static_cast<double>(mism) / static_cast<double>(reps);
    const double se = std::sqrt(tv * (1.0 - tv) / static_cast<double>(reps));
    add("coupling_mismatch", freq, tv, std::abs(freq - tv) <= 3.0 * se);
  }

  {
    const PinskerCheck pc = pinsker_gaussian_check(
        {0.3, 0.0}, {0.0, 0.0}, 4, 1.0, 50000, cfg.seed);
    add("pinsker_gaussian", pc.tv_mc, pc.bound, pc.holds);
  }
  {
    std::vector<std::vector<double>> eye(16, std::vector<double>(16, 0.0));
    for (std::size_t i = 0; i < 16; ++i) eye[i][i] = 1.0;
    const GaussianMaxReport gm = gaussian_max_check(eye, 8.0, 50000, cfg.seed);
    add("gaussian_max", gm.mean_abs_max, gm.mean_bound, gm.holds);
  }
  {
    bool nf_ok = true;
    for (int trial = 0; trial < 100; ++trial) {
      FiniteMeasure qm;
      random_measure(rng, 5, &qm);
      const SimplexVector q(qm.weights);
      auto raw = sample_raw(q, 20, mix_seed(cfg.seed, 0x41ULL, trial));
      auto perm = raw;
      for (std::size_t i = perm.size(); i > 1; --i) {
        std::swap(perm[i - 1], perm[rng.below(i)]);
      }
      nf_ok = nf_ok &&
              neyman_fisher_check(raw, perm, q, SimplexVector::uniform(5));
    }
    add("neyman_fisher_100", nf_ok ? 1 : 0, 1, nf_ok);
  }
  return csv;
}

CsvWriter cmd_noneq(const ExperimentConfig& cfg) {
  const McSettings mc = mc_from_config(cfg);
  const NoneqReport report = nonequivalence_demo(cfg.d, cfg.n, cfg.m, mc);

  CsvWriter csv;
  emit_metadata(csv, cfg);
  csv.header({"metric", "value", "mc_stderr", "holds"});
  const auto num = [](double v) { return CsvWriter::fmt(v); };
  csv.row({"b_bits", num(static_cast<double>(report.b)), "0", "1"});
  csv.row({"total_bits_mb", num(static_cast<double>(report.total_bits)), "0",
           report.scenario_ok ? "1" : "0"});
  csv.row({"dimension_d", num(static_cast<double>(report.d)), "0", "1"});
  csv.row({"cond_sparse_d_over_nlogd", num(report.cond_sparse), "0", "1"});
  csv.row({"cond_growth_n_vs_sqrtd_logd", num(report.cond_growth_lhs),
           num(report.cond_growth_rhs),
           report.cond_growth_holds ? "1" : "0"});
  csv.row({"sandwich_lo_sq", num(report.sandwich_lo_sq), "0",
           report.sandwich_feasible ? "1" : "0"});
  csv.row({"sandwich_hi_sq", num(report.sandwich_hi_sq), "0",
           report.sandwich_feasible ? "1" : "0"});
  csv.row({"rho_used", num(report.rho), "0", "1"});
  csv.row({"raw_forwarding_risk", num(report.raw_forwarding_risk.risk),
           num(report.raw_forwarding_risk.mc_stderr),
           report.raw_below_one_third ? "1" : "0"});
  for (const auto& entry : report.gaussian_risks) {
    csv.row({"gaussian_risk_" + entry.name, num(entry.risk.risk),
             num(entry.risk.mc_stderr),
             entry.risk.risk > 2.0 / 3.0 ? "1" : "0"});
  }
  return csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed uniformity-testing laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  std::size_t jobs_override = 0;

  for (const char* name : {"calibrate", "risk", "sweep", "equiv", "noneq"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")
        ->required();
    sub->add_option("--out", out_path, "output CSV path (default: stdout)");
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](std::uint64_t v) {
          seed_override = v;
          seed_set = true;
        },
        "override config seed");
    sub->add_option("--jobs", jobs_override, "override parallelism degree");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
    const std::string command = app.get_subcommands().front()->get_name();
    if (cfg.command != command) {
      throw ValidationError("config: field 'command' is '" + cfg.command +
                            "' but the subcommand is '" + command + "'");
    }
    if (const char* env = std::getenv("DISTEST_SEED")) {
      cfg.seed = std::strtoull(env, nullptr, 10);
    }
    if (const char* env = std::getenv("DISTEST_JOBS")) {
      cfg.jobs = std::strtoull(env, nullptr, 10);
    }
    if (const char* env = std::getenv("DISTEST_OUT"); env && out_path.empty()) {
      out_path = env;
    }
    if (seed_set) cfg.seed = seed_override;
    if (jobs_override > 0) cfg.jobs = jobs_override;
    if (!out_path.empty()) cfg.out_path = out_path;

    CsvWriter csv;
    if (command == "calibrate") {
      csv = cmd_calibrate(cfg);
    } else if (command == "risk") {
      csv = cmd_risk(cfg);
    } else if (command == "sweep") {
      csv = cmd_sweep(cfg);
    } else if (command == "equiv") {
      csv = cmd_equiv(cfg);
    } else {
      csv = cmd_noneq(cfg);
    }
    if (cfg.out_path.empty()) {
      std::cout << csv.str();
    } else {
      csv.write_file(cfg.out_path);
    }
    return kExitOk;
  } catch (const RegimeError& e) {
    std::cerr << "regime refusal: " << e.what() << "\n";
    return kExitRegime;
  } catch (const BracketError& e) {
    std::cerr << "numerical failure: " << e.what()
              << " (risk_lo=" << e.risk_lo << ", risk_hi=" << e.risk_hi
              << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
