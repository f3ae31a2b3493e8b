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

#include "distest/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "distest/rng.hpp"

namespace distest {
namespace {

using nlohmann::json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "command",     "model",          "constraint",       "randomness",
      "aggregator",  "m",              "n",                "d",
      "b",           "epsilon",        "delta",            "clip_multiplier",
      "c_shift",     "ratio_R",        "rho",              "rho_lo",
      "rho_hi",      "panel_construction", "panel_size",   "alpha",
      "target_risk", "tol",            "calibration_reps", "eval_reps",
      "seed",        "jobs",           "sweep_param",      "sweep_grid",
      "synthetic",   "synthetic_exponent", "equiv_preset", "bins",
      "measure_p_json", "measure_q_json", "out_path",
  };
  return keys;
}

template <typename T>
void read_field(const json& j, const char* key, T* out) {
  if (j.contains(key)) *out = j.at(key).get<T>();
}

void require_one_of(const std::string& value, const char* field,
                    std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) return;
  }
  throw ValidationError(std::string("config: invalid value for field '") +
                        field + "': " + value);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: JSON parse error: ") +
                          e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("config: top level must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    if (known_keys().count(key) == 0) {
      throw ValidationError("config: unknown field '" + key + "'");
    }
  }
  ExperimentConfig cfg;
  if (!j.contains("command")) {
    throw ValidationError("config: missing required field 'command'");
  }
  read_field(j, "command", &cfg.command);
  read_field(j, "model", &cfg.model);
  read_field(j, "constraint", &cfg.constraint);
  read_field(j, "randomness", &cfg.randomness);
  read_field(j, "aggregator", &cfg.aggregator);
  read_field(j, "m", &cfg.m);
  read_field(j, "n", &cfg.n);
  read_field(j, "d", &cfg.d);
  read_field(j, "b", &cfg.b);
  read_field(j, "epsilon", &cfg.epsilon);
  read_field(j, "delta", &cfg.delta);
  read_field(j, "clip_multiplier", &cfg.clip_multiplier);
  read_field(j, "c_shift", &cfg.c_shift);
  read_field(j, "ratio_R", &cfg.ratio_R);
  read_field(j, "rho", &cfg.rho);
  read_field(j, "rho_lo", &cfg.rho_lo);
  read_field(j, "rho_hi", &cfg.rho_hi);
  read_field(j, "panel_construction", &cfg.panel_construction);
  read_field(j, "panel_size", &cfg.panel_size);
  read_field(j, "alpha", &cfg.alpha);
  read_field(j, "target_risk", &cfg.target_risk);
  read_field(j, "tol", &cfg.tol);
  read_field(j, "calibration_reps", &cfg.calibration_reps);
  read_field(j, "eval_reps", &cfg.eval_reps);
  read_field(j, "seed", &cfg.seed);
  read_field(j, "jobs", &cfg.jobs);
  read_field(j, "sweep_param", &cfg.sweep_param);
  read_field(j, "sweep_grid", &cfg.sweep_grid);
  read_field(j, "synthetic", &cfg.synthetic);
  read_field(j, "synthetic_exponent", &cfg.synthetic_exponent);
  read_field(j, "equiv_preset", &cfg.equiv_preset);
  read_field(j, "bins", &cfg.bins);
  read_field(j, "measure_p_json", &cfg.measure_p_json);
  read_field(j, "measure_q_json", &cfg.measure_q_json);
  read_field(j, "out_path", &cfg.out_path);
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("config: cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["command"] = command;
  j["model"] = model;
  j["constraint"] = constraint;
  j["randomness"] = randomness;
  j["aggregator"] = aggregator;
  j["m"] = m;
  j["n"] = n;
  j["d"] = d;
  j["b"] = b;
  j["epsilon"] = epsilon;
  j["delta"] = delta;
  j["clip_multiplier"] = clip_multiplier;
  j["c_shift"] = c_shift;
  j["ratio_R"] = ratio_R;
  j["rho"] = rho;
  j["rho_lo"] = rho_lo;
  j["rho_hi"] = rho_hi;
  j["panel_construction"] = panel_construction;
  j["panel_size"] = panel_size;
  j["alpha"] = alpha;
  j["target_risk"] = target_risk;
  j["tol"] = tol;
  j["calibration_reps"] = calibration_reps;
  j["eval_reps"] = eval_reps;
  j["seed"] = seed;
  j["sweep_param"] = sweep_param;
  j["sweep_grid"] = sweep_grid;
  j["synthetic"] = synthetic;
  j["synthetic_exponent"] = synthetic_exponent;
  j["equiv_preset"] = equiv_preset;
  j["bins"] = bins;
  j["measure_p_json"] = measure_p_json;
  j["measure_q_json"] = measure_q_json;
  // jobs and out_path are execution-environment knobs, not part of the
  // experiment identity: excluding them keeps reruns at any parallelism
  // degree (and any output location) byte-identical.
  return j.dump();  // nlohmann sorts object keys: canonical
}

void ExperimentConfig::validate() const {
  require_one_of(command, "command",
                 {"calibrate", "risk", "sweep", "equiv", "noneq"});
  require_one_of(model, "model", {"multinomial", "gaussian"});
  require_one_of(constraint, "constraint", {"none", "bandwidth", "dp"});
  require_one_of(randomness, "randomness", {"local", "shared"});
  require_one_of(aggregator, "aggregator",
                 {"pooled_chi2", "sum_of_squares", "sum_of_bits", "chi2_bit",
                  "dp_scalar_proj", "dp_scalar_chi2", "panel_lr"});
  require_one_of(panel_construction, "panel_construction",
                 {"dense_pm", "prior_sampled"});
  if (m < 1 || n < 1 || d < 1) {
    throw ValidationError("config: fields m, n, d must be >= 1");
  }
  if (constraint == "bandwidth" && b < 1) {
    throw ValidationError("config: field 'b' must be >= 1 under bandwidth");
  }
  if (constraint == "dp") {
    if (!(epsilon > 0.0)) {
      throw ValidationError("config: field 'epsilon' must be > 0");
    }
    if (delta < 0.0 || delta >= 1.0) {
      throw ValidationError("config: field 'delta' must lie in [0, 1)");
    }
  }
  if (!(ratio_R > 1.0)) {
    throw ValidationError("config: field 'ratio_R' must be > 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("config: field 'alpha' must lie in (0, 1)");
  }
  if (!(target_risk > 0.0 && target_risk < 2.0)) {
    throw ValidationError("config: field 'target_risk' must lie in (0, 2)");
  }
  if (!(tol > 0.0)) {
    throw ValidationError("config: field 'tol' must be > 0");
  }
  if (command == "risk" && !(rho > 0.0)) {
    throw ValidationError("config: field 'rho' must be > 0 for 'risk'");
  }
  if (command == "sweep" && !synthetic) {
    require_one_of(sweep_param, "sweep_param", {"m", "n", "b", "epsilon"});
  }
  if (command == "sweep" && sweep_grid.size() < 2) {
    throw ValidationError(
        "config: field 'sweep_grid' needs at least 2 points");
  }
  if (command == "equiv") {
    require_one_of(equiv_preset, "equiv_preset",
                   {"lemma-suite", "carter-direction", "custom-tv"});
    if (bins < 2) throw ValidationError("config: field 'bins' must be >= 2");
  }
}

std::string ExperimentConfig::hash() const {
  const std::string text = to_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

ProtocolSpec spec_from_config(const ExperimentConfig& cfg) {
  ProtocolSpec spec;
  spec.model =
      cfg.model == "multinomial" ? ModelKind::multinomial : ModelKind::gaussian;
  if (cfg.constraint == "none") {
    spec.constraint = ConstraintKind::none;
  } else if (cfg.constraint == "bandwidth") {
    spec.constraint = ConstraintKind::bandwidth;
  } else {
    spec.constraint = ConstraintKind::dp;
  }
  spec.randomness = cfg.randomness == "local" ? RandomnessKind::local
                                              : RandomnessKind::shared;
  if (cfg.aggregator == "pooled_chi2") {
    spec.aggregator = AggregatorKind::pooled_chi2;
  } else if (cfg.aggregator == "sum_of_squares") {
    spec.aggregator = AggregatorKind::sum_of_squares;
  } else if (cfg.aggregator == "sum_of_bits") {
    spec.aggregator = AggregatorKind::sum_of_bits;
  } else if (cfg.aggregator == "chi2_bit") {
    spec.aggregator = AggregatorKind::chi2_bit;
  } else if (cfg.aggregator == "dp_scalar_proj") {
    spec.aggregator = AggregatorKind::dp_scalar_proj;
  } else if (cfg.aggregator == "dp_scalar_chi2") {
    spec.aggregator = AggregatorKind::dp_scalar_chi2;
  } else if (cfg.aggregator == "panel_lr") {
    spec.aggregator = AggregatorKind::panel_lr;
  }
  spec.m = cfg.m;
  spec.n = cfg.n;
  spec.d = cfg.d;
  spec.b = cfg.b;
  if (spec.constraint == ConstraintKind::dp) {
    spec.dp = DpParams(cfg.epsilon, cfg.delta, 1.0);
  }
  spec.c_shift = cfg.c_shift;
  spec.clip_multiplier = cfg.clip_multiplier;
  spec.shared_seed = mix_seed(cfg.seed, 0x5eedULL);
  if (spec.aggregator == AggregatorKind::panel_lr) {
    spec.lr_panel = std::make_shared<AlternativePanel>(
        panel_from_config(cfg, cfg.rho > 0.0 ? cfg.rho : 0.1));
  }
  spec.validate();
  return spec;
}

McSettings mc_from_config(const ExperimentConfig& cfg) {
  McSettings mc;
  mc.alpha = cfg.command == "sweep" ? 0.25 : cfg.alpha;
  mc.calibration_reps = cfg.calibration_reps;
  mc.eval_reps = cfg.eval_reps;
  mc.panel_size = cfg.panel_size;
  mc.construction = cfg.panel_construction == "dense_pm"
                        ? PanelConstruction::dense_pm
                        : PanelConstruction::prior_sampled;
  mc.ratio_R = cfg.ratio_R;
  mc.tol = cfg.tol;
  mc.seed = cfg.seed;
  mc.jobs = cfg.jobs;
  return mc;
}

AlternativePanel panel_from_config(const ExperimentConfig& cfg, double rho) {
  const PanelConstruction construction =
      cfg.panel_construction == "dense_pm" ? PanelConstruction::dense_pm
                                           : PanelConstruction::prior_sampled;
  const std::uint64_t seed = mix_seed(cfg.seed, 0x9a9e1ULL);
  if (cfg.model == "multinomial") {
    return make_multinomial_panel(cfg.d, rho, RatioClass(cfg.ratio_R),
                                  construction, cfg.panel_size, seed);
  }
  const double noise = 1.0 / std::sqrt(2.0 * static_cast<double>(cfg.n));
  return make_gaussian_panel(cfg.d, rho, noise, construction, cfg.panel_size,
                             seed);
}

}  // namespace distest
