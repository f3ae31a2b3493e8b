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

#include "distest/equivalence_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "distest/rng.hpp"

namespace distest {
namespace {

constexpr double kMassTol = 1e-12;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Merge two measures onto the union of their supports (exact atom match).
std::vector<std::pair<double, double>> aligned_weights(const FiniteMeasure& p,
                                                       const FiniteMeasure& q) {
  std::map<double, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    merged[p.atoms[i]].first += p.weights[i];
  }
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    merged[q.atoms[i]].second += q.weights[i];
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(merged.size());
  for (const auto& [atom, w] : merged) out.push_back(w);
  return out;
}

std::size_t sample_index(const std::vector<double>& weights, double mass,
                         Rng& rng) {
  double u = rng.uniform() * mass;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    u -= weights[i];
    if (u < 0.0) return i;
  }
  return weights.empty() ? 0 : weights.size() - 1;
}

double spectral_norm(const std::vector<std::vector<double>>& m) {
  const std::size_t k = m.size();
  std::vector<double> v(k, 1.0 / std::sqrt(static_cast<double>(k)));
  double norm = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    // Power iteration on M^T M.
    std::vector<double> mv(k, 0.0), w(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      mv[i] = std::inner_product(m[i].begin(), m[i].end(), v.begin(), 0.0);
    }
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < k; ++i) w[j] += m[i][j] * mv[i];
    }
    const double wn =
        std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    if (wn == 0.0) return 0.0;
    for (std::size_t j = 0; j < k; ++j) v[j] = w[j] / wn;
    norm = std::sqrt(wn);
  }
  return norm;
}

// Cholesky-based SPD check (matrix is not modified for the caller).
void require_spd(const std::vector<std::vector<double>>& m) {
  const std::size_t k = m.size();
  for (std::size_t i = 0; i < k; ++i) {
    if (m[i].size() != k) throw ValidationError("matrix must be square");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(m[i][j] - m[j][i]) > 1e-9) {
        throw ValidationError("matrix must be symmetric");
      }
    }
  }
  auto a = m;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t c = 0; c < j; ++c) s -= a[i][c] * a[j][c];
      if (i == j) {
        if (s <= 0.0) throw ValidationError("matrix must be positive definite");
        a[i][i] = std::sqrt(s);
      } else {
        a[i][j] = s / a[j][j];
      }
    }
  }
}

}  // namespace

void FiniteMeasure::validate(bool probability) const {
  if (atoms.size() != weights.size()) {
    throw ValidationError("FiniteMeasure: atoms/weights length mismatch");
  }
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("FiniteMeasure: weights must be finite and >= 0");
    }
  }
  if (probability && std::abs(total_mass() - 1.0) > kMassTol) {
    throw ValidationError("FiniteMeasure: probability mass must sum to 1");
  }
}

double FiniteMeasure::total_mass() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

std::string FiniteMeasure::to_json() const {
  nlohmann::json j;
  j["atoms"] = atoms;
  j["weights"] = weights;
  return j.dump();
}

FiniteMeasure FiniteMeasure::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  FiniteMeasure m;
  m.atoms = j.at("atoms").get<std::vector<double>>();
  m.weights = j.at("weights").get<std::vector<double>>();
  m.validate(false);
  return m;
}

void KernelMatrix::validate() const {
  if (rows.size() != source_atoms.size()) {
    throw ValidationError("KernelMatrix: one row per source atom required");
  }
  for (const auto& row : rows) {
    if (row.size() != target_atoms.size()) {
      throw ValidationError("KernelMatrix: row length must match targets");
    }
    double mass = 0.0;
    for (double x : row) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw ValidationError("KernelMatrix: entries must be finite and >= 0");
      }
      mass += x;
    }
    if (std::abs(mass - 1.0) > kMassTol) {
      throw ValidationError("KernelMatrix: rows must sum to 1");
    }
  }
}

KernelMatrix KernelMatrix::identity(const std::vector<double>& atoms) {
  KernelMatrix k;
  k.source_atoms = atoms;
  k.target_atoms = atoms;
  k.rows.assign(atoms.size(), std::vector<double>(atoms.size(), 0.0));
  for (std::size_t i = 0; i < atoms.size(); ++i) k.rows[i][i] = 1.0;
  return k;
}

std::string KernelMatrix::to_json() const {
  nlohmann::json j;
  j["source_atoms"] = source_atoms;
  j["target_atoms"] = target_atoms;
  j["rows"] = rows;
  return j.dump();
}

KernelMatrix KernelMatrix::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  KernelMatrix k;
  k.source_atoms = j.at("source_atoms").get<std::vector<double>>();
  k.target_atoms = j.at("target_atoms").get<std::vector<double>>();
  k.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  k.validate();
  return k;
}

double tv_exact(const FiniteMeasure& p, const FiniteMeasure& q) {
  p.validate();
  q.validate();
  double l1 = 0.0;
  for (const auto& [wp, wq] : aligned_weights(p, q)) l1 += std::abs(wp - wq);
  return 0.5 * l1;
}

std::pair<double, double> maximal_coupling(const FiniteMeasure& p,
                                           const FiniteMeasure& q, Rng& rng) {
  p.validate();
  q.validate();
  std::map<double, std::pair<double, double>> merged;
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    merged[p.atoms[i]].first += p.weights[i];
  }
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    merged[q.atoms[i]].second += q.weights[i];
  }
  std::vector<double> atoms, overlap, res_p, res_q;
  double overlap_mass = 0.0;
  for (const auto& [atom, w] : merged) {
    atoms.push_back(atom);
    const double o = std::min(w.first, w.second);
    overlap.push_back(o);
    res_p.push_back(w.first - o);
    res_q.push_back(w.second - o);
    overlap_mass += o;
  }
  if (rng.uniform() < overlap_mass) {
    const double a = atoms[sample_index(overlap, overlap_mass, rng)];
    return {a, a};
  }
  const double residual = 1.0 - overlap_mass;
  const double x = atoms[sample_index(res_p, residual, rng)];
  const double y = atoms[sample_index(res_q, residual, rng)];
  return {x, y};
}

FiniteMeasure apply_kernel(const FiniteMeasure& p, const KernelMatrix& k) {
  p.validate(false);
  k.validate();
  if (p.atoms != k.source_atoms) {
    throw ValidationError("apply_kernel: measure support must match kernel");
  }
  FiniteMeasure out;
  out.atoms = k.target_atoms;
  out.weights.assign(k.target_atoms.size(), 0.0);
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    for (std::size_t j = 0; j < k.target_atoms.size(); ++j) {
      out.weights[j] += p.weights[i] * k.rows[i][j];
    }
  }
  return out;
}

KernelMatrix compose_kernels(const KernelMatrix& first,
                             const KernelMatrix& second) {
  first.validate();
  second.validate();
  if (first.target_atoms != second.source_atoms) {
    throw ValidationError("compose_kernels: intermediate supports differ");
  }
  KernelMatrix out;
  out.source_atoms = first.source_atoms;
  out.target_atoms = second.target_atoms;
  out.rows.assign(first.rows.size(),
                  std::vector<double>(second.target_atoms.size(), 0.0));
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    for (std::size_t mid = 0; mid < first.target_atoms.size(); ++mid) {
      const double w = first.rows[i][mid];
      if (w == 0.0) continue;
      for (std::size_t j = 0; j < second.target_atoms.size(); ++j) {
        out.rows[i][j] += w * second.rows[mid][j];
      }
    }
  }
  return out;
}

InequalityCheck check_data_processing(const FiniteMeasure& p,
                                      const FiniteMeasure& q,
                                      const KernelMatrix& k) {
  InequalityCheck c;
  c.rhs = tv_exact(p, q);
  c.lhs = tv_exact(apply_kernel(p, k), apply_kernel(q, k));
  c.holds = c.lhs <= c.rhs + kMassTol;
  return c;
}

InequalityCheck check_product_bound(
    const std::vector<std::pair<FiniteMeasure, FiniteMeasure>>& pairs) {
  std::size_t product_size = 1;
  for (const auto& [p, q] : pairs) {
    p.validate();
    q.validate();
    product_size *= aligned_weights(p, q).size();
    if (product_size > 1000000) {
      throw ValidationError("check_product_bound: product support too large");
    }
  }
  InequalityCheck c;
  std::vector<std::vector<std::pair<double, double>>> factors;
  for (const auto& [p, q] : pairs) {
    factors.push_back(aligned_weights(p, q));
    c.rhs += tv_exact(p, q);
  }
  // Enumerate the product support with an odometer over factor indices.
  std::vector<std::size_t> idx(factors.size(), 0);
  double l1 = 0.0;
  while (true) {
    double wp = 1.0, wq = 1.0;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      wp *= factors[j][idx[j]].first;
      wq *= factors[j][idx[j]].second;
    }
    l1 += std::abs(wp - wq);
    std::size_t j = 0;
    for (; j < factors.size(); ++j) {
      if (++idx[j] < factors[j].size()) break;
      idx[j] = 0;
    }
    if (j == factors.size()) break;
  }
  c.lhs = 0.5 * l1;
  c.holds = c.lhs <= c.rhs + kMassTol;
  return c;
}

InequalityCheck hellinger_l1_check(const FiniteMeasure& p,
                                   const FiniteMeasure& q) {
  p.validate();
  q.validate();
  InequalityCheck c;
  double l1 = 0.0, h2 = 0.0;
  for (const auto& [wp, wq] : aligned_weights(p, q)) {
    l1 += std::abs(wp - wq);
    const double dr = std::sqrt(wp) - std::sqrt(wq);
    h2 += dr * dr;
  }
  c.lhs = 0.5 * l1;
  c.rhs = std::sqrt(h2);
  c.holds = c.lhs <= c.rhs + kMassTol;
  return c;
}

PinskerCheck pinsker_gaussian_check(const std::vector<double>& f,
                                    const std::vector<double>& g,
                                    std::size_t n, double sigma,
                                    std::size_t reps, std::uint64_t seed) {
  if (f.size() != g.size()) {
    throw ValidationError("pinsker_gaussian_check: dimension mismatch");
  }
  if (!(sigma > 0.0)) {
    throw ValidationError("pinsker_gaussian_check: sigma must be > 0");
  }
  const std::size_t d = f.size();
  double dist2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    dist2 += (f[i] - g[i]) * (f[i] - g[i]);
  }
  const double dist = std::sqrt(dist2);
  PinskerCheck out;
  out.bound = std::sqrt(static_cast<double>(n)) / (2.0 * sigma) * dist;
  const double delta = std::sqrt(static_cast<double>(n)) * dist / sigma;
  out.tv_closed_form = 2.0 * normal_cdf(delta / 2.0) - 1.0;
  if (dist == 0.0) {
    out.holds = true;
    return out;
  }
  // TV = P_f(log LR > 0) - P_g(log LR > 0) with LR = dP_f / dP_g; the log
  // ratio of the n-fold products reduces to a linear statistic in the data.
  Rng rng(mix_seed(seed, 0x70696eULL));
  std::size_t hits_f = 0, hits_g = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    double log_lr_f = 0.0, log_lr_g = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t i = 0; i < d; ++i) {
        const double z = rng.normal();
        const double xf = f[i] + sigma * z;
        const double xg = g[i] + sigma * z;
        log_lr_f += ((xf - g[i]) * (xf - g[i]) - (xf - f[i]) * (xf - f[i])) /
                    (2.0 * sigma * sigma);
        log_lr_g += ((xg - g[i]) * (xg - g[i]) - (xg - f[i]) * (xg - f[i])) /
                    (2.0 * sigma * sigma);
      }
    }
    if (log_lr_f > 0.0) ++hits_f;
    if (log_lr_g > 0.0) ++hits_g;
  }
  const double pf = static_cast<double>(hits_f) / static_cast<double>(reps);
  const double pg = static_cast<double>(hits_g) / static_cast<double>(reps);
  out.tv_mc = pf - pg;
  out.mc_stderr = std::sqrt((pf * (1.0 - pf) + pg * (1.0 - pg)) /
                            static_cast<double>(reps));
  out.holds = out.tv_mc <= std::min(1.0, out.bound) + 3.0 * out.mc_stderr;
  return out;
}

GaussianMaxReport gaussian_max_check(const std::vector<std::vector<double>>& m,
                                     double tail_x, std::size_t reps,
                                     std::uint64_t seed) {
  require_spd(m);
  const std::size_t k = m.size();
  GaussianMaxReport out;
  out.spectral_norm = spectral_norm(m);
  const double logk = std::max(std::log(static_cast<double>(k)), std::log(2.0));
  out.mean_bound = 3.0 * out.spectral_norm * std::sqrt(logk);
  out.tail_bound = 2.0 * static_cast<double>(k) * std::exp(-tail_x / 4.0);
  const double tail_level = out.spectral_norm * out.spectral_norm * tail_x;
  Rng rng(mix_seed(seed, 0x6d6178ULL));
  double sum_max = 0.0;
  std::size_t tail_hits = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto z = rng.normal_vector(k);
    double max_abs = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double gi =
          std::inner_product(m[i].begin(), m[i].end(), z.begin(), 0.0);
      max_abs = std::max(max_abs, std::abs(gi));
    }
    sum_max += max_abs;
    if (max_abs * max_abs >= tail_level) ++tail_hits;
  }
  out.mean_abs_max = sum_max / static_cast<double>(reps);
  out.tail_freq = static_cast<double>(tail_hits) / static_cast<double>(reps);
  const double mc_slack =
      3.0 * out.spectral_norm / std::sqrt(static_cast<double>(reps));
  out.holds = out.mean_abs_max <= out.mean_bound + mc_slack &&
              out.tail_freq <= std::min(1.0, out.tail_bound) +
                                   3.0 / std::sqrt(static_cast<double>(reps));
  return out;
}

double deficiency_upper(const std::vector<FiniteMeasure>& model_p,
                        const std::vector<FiniteMeasure>& model_q,
                        const KernelMatrix& c) {
  if (model_p.size() != model_q.size() || model_p.empty()) {
    throw ValidationError("deficiency_upper: parameter grids must align");
  }
  double worst = 0.0;
  for (std::size_t f = 0; f < model_p.size(); ++f) {
    worst = std::max(worst, tv_exact(apply_kernel(model_q[f], c), model_p[f]));
  }
  return worst;
}

FiniteMeasure binomial_measure(std::size_t n, double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ValidationError("binomial_measure: q must lie in [0,1]");
  }
  FiniteMeasure m;
  m.atoms.resize(n + 1);
  m.weights.resize(n + 1);
  const double lq = q > 0.0 ? std::log(q) : 0.0;
  const double l1q = q < 1.0 ? std::log1p(-q) : 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    m.atoms[k] = static_cast<double>(k);
    if ((q == 0.0 && k > 0) || (q == 1.0 && k < n)) {
      m.weights[k] = 0.0;
      continue;
    }
    const double lg = std::lgamma(static_cast<double>(n) + 1.0) -
                      std::lgamma(static_cast<double>(k) + 1.0) -
                      std::lgamma(static_cast<double>(n - k) + 1.0);
    m.weights[k] = std::exp(lg + static_cast<double>(k) * lq +
                            static_cast<double>(n - k) * l1q);
  }
  // Remove floating-point drift so the measure passes the 1e-12 gate.
  const double mass = m.total_mass();
  for (double& w : m.weights) w /= mass;
  return m;
}

namespace {

// Bin centers must be computed with one shared formula: measures produced by
// discretize_gaussian and root_bin_kernel are compared atom-by-atom with
// tv_exact, which matches atoms by exact value.
double bin_center(double lo, double width, std::size_t j) {
  return lo + width * (static_cast<double>(j) + 0.5);
}

}  // namespace

DiscretizedGaussian discretize_gaussian(double mean, double sd, double lo,
                                        double hi, std::size_t bins) {
  if (!(sd > 0.0) || !(hi > lo) || bins == 0) {
    throw ValidationError("discretize_gaussian: invalid grid");
  }
  DiscretizedGaussian out;
  out.measure.atoms.resize(bins);
  out.measure.weights.resize(bins);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    const double left = lo + width * static_cast<double>(j);
    out.measure.atoms[j] = bin_center(lo, width, j);
    out.measure.weights[j] = normal_cdf((left + width - mean) / sd) -
                             normal_cdf((left - mean) / sd);
  }
  const double low_tail = normal_cdf((lo - mean) / sd);
  const double high_tail = 1.0 - normal_cdf((hi - mean) / sd);
  out.measure.weights.front() += low_tail;
  out.measure.weights.back() += high_tail;
  out.discretization_error = low_tail + high_tail;
  const double mass = out.measure.total_mass();
  for (double& w : out.measure.weights) w /= mass;
  return out;
}

KernelMatrix root_bin_kernel(std::size_t n, double lo, double hi,
                             std::size_t bins, double c_shift) {
  if (n == 0) throw ValidationError("root_bin_kernel: n must be positive");
  KernelMatrix k;
  k.source_atoms.resize(n + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  k.target_atoms.resize(bins);
  for (std::size_t j = 0; j < bins; ++j) {
    k.target_atoms[j] = bin_center(lo, width, j);
  }
  const double nn = static_cast<double>(n);
  const double target_var = 1.0 / (2.0 * nn);
  k.rows.assign(n + 1, std::vector<double>(bins, 0.0));
  for (std::size_t count = 0; count <= n; ++count) {
    k.source_atoms[count] = static_cast<double>(count);
    const double v = std::sqrt((static_cast<double>(count) + c_shift) / nn);
    const double qhat =
        std::min(1.0, (static_cast<double>(count) + c_shift) / nn);
    // Jitter topping the delta-method variance up to the target 1/(2n).
    const double s2 = std::max(0.0, target_var - (1.0 - qhat) / (4.0 * nn));
    auto& row = k.rows[count];
    if (s2 < 1e-18) {
      const double pos = std::clamp(v, lo, hi - 0.5 * width);
      const auto j = static_cast<std::size_t>((pos - lo) / width);
      row[std::min(j, bins - 1)] = 1.0;
    } else {
      const double s = std::sqrt(s2);
      for (std::size_t j = 0; j < bins; ++j) {
        const double left = lo + width * static_cast<double>(j);
        row[j] = normal_cdf((left + width - v) / s) -
                 normal_cdf((left - v) / s);
      }
      row.front() += normal_cdf((lo - v) / s);
      row.back() += 1.0 - normal_cdf((hi - v) / s);
      const double mass = std::accumulate(row.begin(), row.end(), 0.0);
      for (double& x : row) x /= mass;
    }
  }
  return k;
}

CarterDirectionReport carter_direction_check(
    const std::vector<std::size_t>& n_values, const std::vector<double>& q_grid,
    std::size_t bins, double c_shift) {
  if (n_values.empty() || q_grid.empty()) {
    throw ValidationError("carter_direction_check: empty grid");
  }
  CarterDirectionReport report;
  report.n_values = n_values;
  for (std::size_t n : n_values) {
    const double sd = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
    // One grid per n, wide enough for every root value and Gaussian mean.
    const double lo = 0.0;
    const double hi = std::sqrt(1.0 + c_shift) + 8.0 * sd;
    const auto kernel = root_bin_kernel(n, lo, hi, bins, c_shift);
    std::vector<FiniteMeasure> model_p, model_q;
    double disc_err = 0.0;
    for (double q : q_grid) {
      auto dg = discretize_gaussian(std::sqrt(q), sd, lo, hi, bins);
      disc_err = std::max(disc_err, dg.discretization_error);
      model_p.push_back(std::move(dg.measure));
      model_q.push_back(binomial_measure(n, q));
    }
    report.deficiency.push_back(deficiency_upper(model_p, model_q, kernel));
    report.discretization_error.push_back(disc_err);
  }
  report.strictly_decreasing = true;
  for (std::size_t i = 1; i < report.deficiency.size(); ++i) {
    if (!(report.deficiency[i] < report.deficiency[i - 1])) {
      report.strictly_decreasing = false;
    }
  }
  return report;
}

KernelDpCertificate kernel_dp_certificate(const KernelMatrix& k,
                                          double epsilon) {
  k.validate();
  KernelDpCertificate cert;
  for (std::size_t i = 0; i < k.rows.size(); ++i) {
    for (std::size_t ip = 0; ip < k.rows.size(); ++ip) {
      for (std::size_t j = 0; j < k.target_atoms.size(); ++j) {
        const double a = k.rows[i][j];
        const double b = k.rows[ip][j];
        if (a == 0.0) continue;
        if (b == 0.0) {
          cert.epsilon_hat = std::numeric_limits<double>::infinity();
          cert.certified = false;
          return cert;
        }
        cert.epsilon_hat = std::max(cert.epsilon_hat, std::log(a / b));
      }
    }
  }
  cert.certified = cert.epsilon_hat <= epsilon + kMassTol;
  return cert;
}

TransferReport protocol_transfer(
    const std::vector<FiniteMeasure>& model_p,
    const std::vector<FiniteMeasure>& model_q, const KernelMatrix& c,
    const std::vector<KernelMatrix>& channels, std::size_t bit_budget,
    const std::function<int(const std::vector<std::size_t>&)>& test,
    double channel_epsilon) {
  if (model_p.size() != model_q.size() || model_p.size() < 2) {
    throw ValidationError(
        "protocol_transfer: aligned grids with a null and >= 1 alternative "
        "required");
  }
  if (channels.empty()) {
    throw ValidationError("protocol_transfer: at least one server required");
  }
  const std::size_t m = channels.size();

  std::size_t tuple_count = 1;
  for (const auto& k : channels) {
    tuple_count *= k.target_atoms.size();
    if (tuple_count > 1000000) {
      throw ValidationError("protocol_transfer: instance too large");
    }
  }

  TransferReport report;
  report.bound =
      static_cast<double>(m) * deficiency_upper(model_p, model_q, c);

  // Per-server transcript distributions in both models.
  std::vector<KernelMatrix> composed;
  composed.reserve(m);
  for (const auto& k : channels) composed.push_back(compose_kernels(c, k));

  report.bit_budget_holds = true;
  for (const auto& k : channels) {
    if (bit_budget > 63 ||
        k.target_atoms.size() > (std::size_t{1} << bit_budget)) {
      report.bit_budget_holds = false;
    }
  }

  report.dp_certified = true;
  for (std::size_t j = 0; j < m; ++j) {
    const double eps = channel_epsilon > 0.0
                           ? channel_epsilon
                           : kernel_dp_certificate(
                                 channels[j],
                                 std::numeric_limits<double>::infinity())
                                 .epsilon_hat;
    if (!kernel_dp_certificate(composed[j], eps).certified) {
      report.dp_certified = false;
    }
  }

  const auto reject_prob =
      [&](const std::vector<std::vector<FiniteMeasure>>& dists,
          std::size_t f) {
        std::vector<std::size_t> idx(m, 0);
        double total = 0.0;
        while (true) {
          double w = 1.0;
          for (std::size_t j = 0; j < m; ++j) {
            w *= dists[f][j].weights[idx[j]];
          }
          if (w > 0.0 && test(idx) != 0) total += w;
          std::size_t j = 0;
          for (; j < m; ++j) {
            if (++idx[j] < dists[f][j].atoms.size()) break;
            idx[j] = 0;
          }
          if (j == m) break;
        }
        return total;
      };

  std::vector<std::vector<FiniteMeasure>> dist_p(model_p.size()),
      dist_q(model_q.size());
  for (std::size_t f = 0; f < model_p.size(); ++f) {
    for (std::size_t j = 0; j < m; ++j) {
      dist_p[f].push_back(apply_kernel(model_p[f], channels[j]));
      dist_q[f].push_back(apply_kernel(model_q[f], composed[j]));
    }
  }

  const auto risk = [&](const std::vector<std::vector<FiniteMeasure>>& dists) {
    const double type_one = reject_prob(dists, 0);
    double worst_type_two = 0.0;
    for (std::size_t f = 1; f < dists.size(); ++f) {
      worst_type_two = std::max(worst_type_two, 1.0 - reject_prob(dists, f));
    }
    return type_one + worst_type_two;
  };
  report.risk_model_p = risk(dist_p);
  report.risk_model_q = risk(dist_q);
  report.gap = std::abs(report.risk_model_p - report.risk_model_q);
  report.gap_holds = report.gap <= report.bound + kMassTol;
  return report;
}

}  // namespace distest
