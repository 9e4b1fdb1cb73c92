// Copyright 2026 The relunet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relunet/regression.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "relunet/errors.hpp"
#include "relunet/rng.hpp"

namespace relunet {

namespace {

std::uint64_t fnv(std::uint64_t h, std::uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    h ^= (v >> (8 * k)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Dense parameter vector laid out by (layer, row, col); a hidden unit's shift
// sits at col = p_l, right after its weights.
class Trainer {
 public:
  explicit Trainer(std::span<const std::size_t> widths) : p_(widths.begin(), widths.end()) {
    L_ = p_.size() - 2;
    offset_.push_back(0);
    for (std::size_t l = 0; l <= L_; ++l) offset_.push_back(offset_.back() + p_[l + 1] * stride(l));
    std::size_t tmp = 0;
    for (std::size_t l = 0; l < p_.size(); ++l) {
      act_offset_.push_back(tmp);
      tmp += p_[l];
    }
    act_size_ = tmp;
  }

  std::size_t size() const { return offset_.back(); }
  std::size_t stride(std::size_t l) const { return p_[l] + (l < L_ ? 1 : 0); }

  void init(Rng& rng, double scale, std::vector<double>& theta) const {
    theta.assign(size(), 0.0);
    for (std::size_t l = 0; l <= L_; ++l) {
      const double a = std::min(1.0, scale * std::sqrt(6.0 / static_cast<double>(p_[l] + p_[l + 1])));
      for (std::size_t i = 0; i < p_[l + 1]; ++i) {
        double* row = theta.data() + offset_[l] + i * stride(l);
        for (std::size_t j = 0; j < p_[l]; ++j) row[j] = a * (2.0 * rng.uniform() - 1.0);
        if (l < L_) row[p_[l]] = 0.2 * (2.0 * rng.uniform() - 1.0);
      }
    }
  }

  // Writes all layer activations of x into acts; returns the output.
  double forward(const std::vector<double>& theta, std::span<const double> x, double* acts) const {
    std::copy(x.begin(), x.end(), acts);
    for (std::size_t l = 0; l <= L_; ++l) {
      const double* in = acts + act_offset_[l];
      double* out = acts + act_offset_[l + 1];
      for (std::size_t i = 0; i < p_[l + 1]; ++i) {
        const double* row = theta.data() + offset_[l] + i * stride(l);
        double z = 0.0;
        for (std::size_t j = 0; j < p_[l]; ++j) z += row[j] * in[j];
        out[i] = l < L_ ? std::max(z - row[p_[l]], 0.0) : z;
      }
    }
    return acts[act_offset_[L_ + 1]];
  }

  double risk(const std::vector<double>& theta, const RegressionDataset& data) const {
    std::vector<double> acts(act_size_);
    double sum = 0.0;
    for (std::size_t k = 0; k < data.n(); ++k) {
      const double r = data.Y[k] - forward(theta, data.X.point(k), acts.data());
      sum += r * r;
    }
    return sum / static_cast<double>(data.n());
  }

  double risk_and_grad(const std::vector<double>& theta, const RegressionDataset& data,
                       std::vector<double>& grad) const {
    grad.assign(size(), 0.0);
    std::vector<double> acts(act_size_);
    std::vector<double> delta(act_size_);
    const double scale = 2.0 / static_cast<double>(data.n());
    double sum = 0.0;
    for (std::size_t k = 0; k < data.n(); ++k) {
      const double f = forward(theta, data.X.point(k), acts.data());
      const double r = f - data.Y[k];
      sum += r * r;
      delta[act_offset_[L_ + 1]] = scale * r;
      for (std::size_t l = L_ + 1; l-- > 0;) {
        const double* in = acts.data() + act_offset_[l];
        const double* out = acts.data() + act_offset_[l + 1];
        double* d_out = delta.data() + act_offset_[l + 1];
        double* d_in = delta.data() + act_offset_[l];
        if (l > 0) std::fill(d_in, d_in + p_[l], 0.0);
        for (std::size_t i = 0; i < p_[l + 1]; ++i) {
          double g = d_out[i];
          // subgradient of max(., 0) at 0 is 0
          if (l < L_ && out[i] <= 0.0) g = 0.0;
          if (g == 0.0) continue;
          const double* row = theta.data() + offset_[l] + i * stride(l);
          double* grow = grad.data() + offset_[l] + i * stride(l);
          for (std::size_t j = 0; j < p_[l]; ++j) {
            grow[j] += g * in[j];
            if (l > 0) d_in[j] += g * row[j];
          }
          if (l < L_) grow[p_[l]] -= g;
        }
      }
    }
    return sum / static_cast<double>(data.n());
  }

  // Keeps the k largest |theta| among active coordinates; ties keep the earlier index.
  void prune(std::vector<double>& theta, std::vector<char>& mask, std::size_t k) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (mask[i] && theta[i] != 0.0) idx.push_back(i);
    }
    if (idx.size() <= k) return;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(theta[a]) > std::abs(theta[b]);
    });
    for (std::size_t r = k; r < idx.size(); ++r) {
      theta[idx[r]] = 0.0;
      mask[idx[r]] = 0;
    }
  }

  SparseNetwork to_network(const std::vector<double>& theta, double F) const {
    std::vector<Layer> layers;
    for (std::size_t l = 0; l <= L_; ++l) {
      MatrixBuilder w(p_[l + 1], p_[l]);
      std::vector<double> shift;
      for (std::size_t i = 0; i < p_[l + 1]; ++i) {
        const double* row = theta.data() + offset_[l] + i * stride(l);
        for (std::size_t j = 0; j < p_[l]; ++j) w.add(i, j, row[j]);
        if (l < L_) shift.push_back(row[p_[l]]);
      }
      layers.push_back(Layer{w.build(), std::move(shift)});
    }
    return SparseNetwork(std::move(layers), F);
  }

 private:
  std::vector<std::size_t> p_;
  std::size_t L_ = 0;
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> act_offset_;
  std::size_t act_size_ = 0;
};

struct RestartRun {
  std::vector<double> theta;
  std::vector<double> trajectory;
  std::vector<std::size_t> prune_epochs;
  double risk = 0.0;
  bool diverged = false;
};

RestartRun run_restart(const Trainer& tr, const RegressionDataset& data, std::size_t s_target,
                       const FitHyper& hyper, std::uint64_t seed) {
  RestartRun run;
  Rng rng(seed);
  tr.init(rng, hyper.init_scale, run.theta);
  std::vector<char> mask(tr.size(), 1);
  const std::size_t T = tr.size();
  const std::size_t targets[3] = {s_target + (T - s_target) / 4, s_target + (T - s_target) / 16, s_target};
  const int E = std::max(hyper.epochs, 0);
  const int at[3] = {E / 2, 3 * E / 4, 9 * E / 10};
  int stage = 0;

  double risk = tr.risk(run.theta, data);
  double eta = hyper.step;
  bool stalled = false;
  std::vector<double> grad;
  std::vector<double> trial;
  for (int epoch = 0; epoch < E; ++epoch) {
    if (!std::isfinite(risk)) {
      run.diverged = true;
      break;
    }
    bool pruned = false;
    while (stage < 3 && epoch == at[stage]) {
      tr.prune(run.theta, mask, targets[stage++]);
      pruned = true;
    }
    if (pruned) {
      risk = tr.risk(run.theta, data);
      run.prune_epochs.push_back(static_cast<std::size_t>(epoch));
      run.trajectory.push_back(risk);
      stalled = false;
      eta = hyper.step;
      continue;
    }
    if (!stalled) {
      tr.risk_and_grad(run.theta, data, grad);
      bool accepted = false;
      for (int tries = 0; tries < 40 && !accepted; ++tries) {
        trial = run.theta;
        for (std::size_t i = 0; i < trial.size(); ++i) {
          if (mask[i]) trial[i] = std::clamp(trial[i] - eta * grad[i], -1.0, 1.0);
        }
        const double r = tr.risk(trial, data);
        if (std::isfinite(r) && r <= risk) {
          run.theta.swap(trial);
          risk = r;
          accepted = true;
          eta = std::min(2.0 * eta, 1e6);
        } else {
          eta *= 0.5;
        }
      }
      if (!accepted) stalled = true;
    }
    run.trajectory.push_back(risk);
  }
  while (stage < 3 && !run.diverged) tr.prune(run.theta, mask, targets[stage++]);
  run.risk = tr.risk(run.theta, data);
  if (!std::isfinite(run.risk)) run.diverged = true;
  return run;
}

}  // namespace

std::string design_name(Design d) { return d == Design::kUniform ? "uniform" : "product_density"; }

Design design_from_name(const std::string& name) {
  if (name == "uniform") return Design::kUniform;
  if (name == "product_density") return Design::kProductDensity;
  throw ParseError("design: unknown design '" + name + "'");
}

void draw_design(Design design, std::size_t d, std::size_t n, std::uint64_t seed, PointSet& out) {
  Rng rng(seed);
  out.dim = d;
  out.coords.resize(n * d);
  for (auto& c : out.coords) {
    const double u = rng.uniform();
    // inverse of F(x) = (x + x^2) / 2
    c = design == Design::kUniform ? u : 0.5 * (std::sqrt(1.0 + 8.0 * u) - 1.0);
  }
}

std::uint64_t RegressionDataset::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv(h, n());
  h = fnv(h, d());
  for (double v : X.coords) h = fnv(h, std::bit_cast<std::uint64_t>(v));
  for (double v : Y) h = fnv(h, std::bit_cast<std::uint64_t>(v));
  return h;
}

RegressionDataset sample_dataset(const ScalarFn& f0, std::size_t n, std::size_t d, Design design,
                                 std::uint64_t seed, double noise_sd) {
  if (n == 0 || d == 0) throw DomainError("sample_dataset: n and d must be positive");
  if (!(noise_sd >= 0.0)) throw DomainError("sample_dataset: noise_sd must be nonnegative");
  RegressionDataset data;
  data.noise_sd = noise_sd;
  data.design = design;
  data.seed = seed;
  data.truth = f0;
  draw_design(design, d, n, derive_seed(seed, 0), data.X);
  Rng noise(derive_seed(seed, 1));
  data.Y.resize(n);
  data.noise.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    data.noise[i] = noise_sd * noise.normal();
    data.Y[i] = f0(data.X.point(i)) + data.noise[i];
  }
  return data;
}

double empirical_risk(const SparseNetwork& net, const RegressionDataset& data) {
  return mean_squared_residual(net, data.X, data.Y);
}

FitResult fit_erm(const RegressionDataset& data, std::span<const std::size_t> widths,
                  std::size_t s_target, double F, const FitHyper& hyper) {
  if (widths.size() < 2 || widths.front() != data.d() || widths.back() != 1) {
    throw ShapeError("fit_erm: widths must run from the data dimension to 1");
  }
  for (auto w : widths) {
    if (w == 0) throw ShapeError("fit_erm: widths must be positive");
  }
  if (s_target > capacity(widths)) {
    std::ostringstream msg;
    msg << "fit_erm: s_target " << s_target << " exceeds capacity " << capacity(widths);
    throw DomainError(msg.str());
  }
  if (hyper.restarts < 1) throw DomainError("fit_erm: restarts must be at least 1");
  if (!(F > 0.0)) throw DomainError("fit_erm: F must be positive");
  const Trainer tr(widths);
  std::vector<RestartRun> runs(static_cast<std::size_t>(hyper.restarts));
  std::vector<std::uint64_t> seeds(runs.size());
  for (std::size_t k = 0; k < runs.size(); ++k) seeds[k] = derive_seed(hyper.seed, k);
  const int count = hyper.restarts;
#pragma omp parallel for schedule(dynamic) if (!omp_in_parallel())
  for (int k = 0; k < count; ++k) {
    runs[static_cast<std::size_t>(k)] = run_restart(tr, data, s_target, hyper, seeds[static_cast<std::size_t>(k)]);
  }

  FitResult out(tr.to_network(std::vector<double>(tr.size(), 0.0), F));
  out.restarts = hyper.restarts;
  out.s_target = s_target;
  out.F = F;
  out.dataset_fingerprint = data.fingerprint();
  std::size_t best = runs.size();
  for (std::size_t k = 0; k < runs.size(); ++k) {
    out.outcomes.push_back({seeds[k], runs[k].risk, runs[k].diverged});
    if (runs[k].diverged) {
      ++out.diverged;
      continue;
    }
    if (best == runs.size() || runs[k].risk < runs[best].risk) best = k;
  }
  if (best == runs.size()) throw DomainError("fit_erm: every restart diverged");
  double gap = 0.0;
  for (const auto& r : runs) {
    if (!r.diverged) gap += r.risk - runs[best].risk;
  }
  out.best_restart_risk_gap = gap / static_cast<double>(hyper.restarts - out.diverged);
  out.net = tr.to_network(runs[best].theta, F);
  out.trajectory = std::move(runs[best].trajectory);
  out.prune_epochs = std::move(runs[best].prune_epochs);
  out.empirical_risk = empirical_risk(out.net, data);
  const auto y = evaluate_batch(out.net, data.X);
  for (double v : y) out.train_sup = std::max(out.train_sup, std::abs(v));
  out.exceeds_sup_bound = out.train_sup > F;
  return out;
}

FitResult fit_from_network(const SparseNetwork& net, const RegressionDataset& data, double F) {
  FitResult out(net.with_sup_bound(F));
  out.F = F;
  out.restarts = 0;
  out.empirical_risk = empirical_risk(net, data);
  out.dataset_fingerprint = data.fingerprint();
  out.s_target = count_active(net).active;
  const auto y = evaluate_batch(net, data.X);
  for (double v : y) out.train_sup = std::max(out.train_sup, std::abs(v));
  out.exceeds_sup_bound = out.train_sup > F;
  return out;
}

Predictor network_predictor(SparseNetwork net) {
  return [net = std::move(net)](const PointSet& points) { return evaluate_batch(net, points); };
}

RiskEstimate estimate_prediction_risk(const Predictor& f, const ScalarFn& f0, std::size_t d,
                                      std::size_t mc_points, std::uint64_t seed, Design design) {
  if (mc_points < 100) throw DomainError("estimate_prediction_risk: needs at least 100 points");
  PointSet pts;
  draw_design(design, d, mc_points, seed, pts);
  const auto y = f(pts);
  std::vector<double> sq(mc_points);
  for (std::size_t i = 0; i < mc_points; ++i) {
    const double e = y[i] - f0(pts.point(i));
    sq[i] = e * e;
  }
  const double m = static_cast<double>(mc_points);
  const double mean = block_sum(sq) / m;
  for (auto& v : sq) v = (v - mean) * (v - mean);
  const double var = block_sum(sq) / (m - 1.0);
  return {mean, std::sqrt(var / m)};
}

RiskEstimate estimate_prediction_risk(const SparseNetwork& net, const ScalarFn& f0, std::size_t d,
                                      std::size_t mc_points, std::uint64_t seed, Design design) {
  return estimate_prediction_risk(network_predictor(net), f0, d, mc_points, seed, design);
}

double delta_proxy(const FitResult& fit, std::span<const FitResult> references) {
  double best = fit.empirical_risk;
  for (const auto& r : references) {
    if (r.dataset_fingerprint != fit.dataset_fingerprint) {
      throw DomainError("delta_proxy: reference fit was computed on a different dataset");
    }
    best = std::min(best, r.empirical_risk);
  }
  return fit.empirical_risk - best;
}

SlopeFit log_log_slope(std::span<const double> x, std::span<const double> y, double min_value) {
  if (x.size() != y.size()) throw ShapeError("log_log_slope: x and y differ in length");
  SlopeFit out;
  if (x.size() < 3) {
    out.degenerate = true;
    out.reason = "fewer than 3 points";
    return out;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > min_value) || !std::isfinite(y[i]) || !(x[i] > 0.0)) {
      out.degenerate = true;
      out.reason = "values at or below " + std::to_string(min_value);
      return out;
    }
  }
  const double k = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]) - mx;
    sxx += a * a;
    sxy += a * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) {
    out.degenerate = true;
    out.reason = "x values coincide";
    return out;
  }
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = std::log(y[i]) - out.intercept - out.slope * std::log(x[i]);
    ssr += e * e;
  }
  out.std_error = std::sqrt(ssr / (k - 2.0) / sxx);
  return out;
}

std::vector<std::size_t> FitRecipe::widths(std::size_t d) const {
  std::vector<std::size_t> p(depth + 2, width);
  p.front() = d;
  p.back() = 1;
  return p;
}

std::size_t FitRecipe::s_target(std::size_t n, std::size_t d) const {
  const double nn = static_cast<double>(n);
  const double s = s_scale * std::pow(nn, s_exponent) * std::pow(std::log(nn), s_log_power);
  const auto p = widths(d);
  const double cap = static_cast<double>(capacity(p));
  return static_cast<std::size_t>(std::clamp(std::round(s), 0.0, cap));
}

ExperimentReport rate_experiment(const ExperimentSetup& setup, const Estimator& estimator) {
  const auto& grid = setup.n_grid;
  if (grid.size() < 4) throw DomainError("n_grid: at least 4 sample sizes are needed for a slope");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] == 0 || (i > 0 && grid[i] <= grid[i - 1])) {
      throw DomainError("n_grid: must be positive and strictly increasing");
    }
  }
  if (setup.replications < 1) throw DomainError("replications: must be at least 1");
  const int reps = setup.replications;
  const int jobs = static_cast<int>(grid.size()) * reps;
  std::vector<ExperimentRow> rows(static_cast<std::size_t>(jobs));
  std::vector<char> ok(static_cast<std::size_t>(jobs), 0);
  const int threads = setup.jobs > 0 ? setup.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int job = 0; job < jobs; ++job) {
    const std::size_t ni = static_cast<std::size_t>(job / reps);
    const int rep = job % reps;
    auto& row = rows[static_cast<std::size_t>(job)];
    row.n = grid[ni];
    row.replication = rep;
    row.seed = derive_seed(setup.seed, ni, static_cast<std::uint64_t>(rep));
    try {
      const auto data = sample_dataset(setup.f0, row.n, setup.d, setup.design, derive_seed(row.seed, 0), setup.noise_sd);
      const auto predictor = estimator(data, derive_seed(row.seed, 1), row);
      const auto r = estimate_prediction_risk(predictor, setup.f0, setup.d, setup.mc_points,
                                              derive_seed(row.seed, 2), setup.design);
      row.pred_risk = r.estimate;
      row.pred_risk_se = r.std_error;
      ok[static_cast<std::size_t>(job)] = std::isfinite(r.estimate) ? 1 : 0;
    } catch (const std::exception&) {
      ok[static_cast<std::size_t>(job)] = 0;
    }
  }
  ExperimentReport rep;
  rep.n_grid = grid;
  rep.expected_exponent = setup.expected_exponent;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t ni = 0; ni < grid.size(); ++ni) {
    double sum = 0.0;
    int kept = 0;
    for (int r = 0; r < reps; ++r) {
      const std::size_t job = ni * static_cast<std::size_t>(reps) + static_cast<std::size_t>(r);
      if (ok[job]) {
        rep.rows.push_back(rows[job]);
        sum += rows[job].pred_risk;
        ++kept;
      }
    }
    rep.dropped.push_back(reps - kept);
    const double mean = kept > 0 ? sum / kept : std::numeric_limits<double>::quiet_NaN();
    rep.mean_risk.push_back(mean);
    if (kept > 0) {
      xs.push_back(static_cast<double>(grid[ni]));
      ys.push_back(mean);
    }
  }
  rep.slope = log_log_slope(xs, ys);
  if (xs.size() < grid.size() && !rep.slope.degenerate) rep.slope.reason = "some sample sizes lost every replication";
  return rep;
}

Estimator network_estimator(const FitRecipe& recipe) {
  return [recipe](const RegressionDataset& data, std::uint64_t seed, ExperimentRow& row) {
    auto hyper = recipe.hyper;
    hyper.seed = seed;
    const auto widths = recipe.widths(data.d());
    const auto fit = fit_erm(data, widths, recipe.s_target(data.n(), data.d()), recipe.F, hyper);
    row.empirical_risk = fit.empirical_risk;
    row.s_final = count_active(fit.net).active;
    return network_predictor(fit.net);
  };
}

nlohmann::json to_json(const SlopeFit& s) {
  return {{"slope", s.slope}, {"std_error", s.std_error}, {"intercept", s.intercept},
          {"degenerate", s.degenerate}, {"reason", s.reason}};
}

}  // namespace relunet
