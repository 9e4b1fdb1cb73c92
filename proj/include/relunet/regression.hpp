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

#ifndef RELUNET_REGRESSION_HPP_
#define RELUNET_REGRESSION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "relunet/constructions.hpp"
#include "relunet/kernels.hpp"
#include "relunet/network.hpp"

namespace relunet {

enum class Design {
  kUniform,
  kProductDensity,  // each coordinate has density 1/2 + x on [0,1]
};

std::string design_name(Design d);
Design design_from_name(const std::string& name);

void draw_design(Design design, std::size_t d, std::size_t n, std::uint64_t seed, PointSet& out);

struct RegressionDataset {
  PointSet X;
  std::vector<double> Y;
  std::vector<double> noise;  // Y_i - f0(X_i)
  double noise_sd = 1.0;
  Design design = Design::kUniform;
  std::uint64_t seed = 0;
  ScalarFn truth;

  std::size_t n() const { return Y.size(); }
  std::size_t d() const { return X.dim; }
  std::uint64_t fingerprint() const;
};

RegressionDataset sample_dataset(const ScalarFn& f0, std::size_t n, std::size_t d, Design design,
                                 std::uint64_t seed, double noise_sd = 1.0);

// (1/n) sum (Y_i - f(X_i))^2, block-summed.
double empirical_risk(const SparseNetwork& net, const RegressionDataset& data);

struct FitHyper {
  int restarts = 4;
  int epochs = 400;
  double step = 0.5;
  std::uint64_t seed = 1;
  double init_scale = 1.0;  // multiplies the Glorot bound, result capped at 1
};

struct RestartOutcome {
  std::uint64_t seed = 0;
  double empirical_risk = 0.0;
  bool diverged = false;
};

struct FitResult {
  explicit FitResult(SparseNetwork fitted) : net(std::move(fitted)) {}

  SparseNetwork net;
  double empirical_risk = 0.0;
  int restarts = 0;
  int diverged = 0;
  // Mean over converged restarts of (risk_k - best risk).
  double best_restart_risk_gap = 0.0;
  std::vector<double> trajectory;       // kept restart, risk after each epoch
  std::vector<std::size_t> prune_epochs;  // epochs whose update was a pruning step
  std::vector<RestartOutcome> outcomes;
  std::size_t s_target = 0;
  double F = 0.0;
  double train_sup = 0.0;
  bool exceeds_sup_bound = false;
  std::uint64_t dataset_fingerprint = 0;
};

// Projected full-batch gradient descent with backtracking (halve the step until
// the risk does not increase), parameters clipped to [-1,1] after every step,
// magnitude pruning at 50%, 75% and 90% of the epoch budget towards s_target.
// widths = (p_0, ..., p_{L+1}), p_0 = d, p_{L+1} = 1.
FitResult fit_erm(const RegressionDataset& data, std::span<const std::size_t> widths,
                  std::size_t s_target, double F, const FitHyper& hyper);

// Wraps a given network (e.g. a construction) as a fit on `data`.
FitResult fit_from_network(const SparseNetwork& net, const RegressionDataset& data, double F);

struct RiskEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Batch prediction on a point set.
using Predictor = std::function<std::vector<double>(const PointSet& points)>;

Predictor network_predictor(SparseNetwork net);

// Monte Carlo mean of (f(X) - f0(X))^2 over fresh design draws.
RiskEstimate estimate_prediction_risk(const Predictor& f, const ScalarFn& f0, std::size_t d,
                                      std::size_t mc_points, std::uint64_t seed,
                                      Design design = Design::kUniform);
RiskEstimate estimate_prediction_risk(const SparseNetwork& net, const ScalarFn& f0, std::size_t d,
                                      std::size_t mc_points, std::uint64_t seed,
                                      Design design = Design::kUniform);

// empirical_risk(fit) minus the smallest empirical risk among fit and references.
double delta_proxy(const FitResult& fit, std::span<const FitResult> references);

struct SlopeFit {
  double slope = 0.0;
  double std_error = 0.0;
  double intercept = 0.0;
  bool degenerate = false;
  std::string reason;
};

// Least squares of log y on log x with the usual slope standard error.
SlopeFit log_log_slope(std::span<const double> x, std::span<const double> y,
                       double min_value = 1e-12);

struct FitRecipe {
  std::size_t depth = 3;
  std::size_t width = 16;
  // s_target(n) = round(s_scale n^s_exponent log(n)^s_log_power), capped at capacity.
  double s_scale = 1.0;
  double s_exponent = 0.5;
  double s_log_power = 1.0;
  double F = 1.0;
  FitHyper hyper;

  std::vector<std::size_t> widths(std::size_t d) const;
  std::size_t s_target(std::size_t n, std::size_t d) const;
};

struct ExperimentRow {
  std::size_t n = 0;
  int replication = 0;
  double empirical_risk = 0.0;
  double pred_risk = 0.0;
  double pred_risk_se = 0.0;
  std::size_t s_final = 0;
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  std::vector<std::size_t> n_grid;
  std::vector<double> mean_risk;  // per n over surviving replications
  std::vector<int> dropped;
  SlopeFit slope;
  std::optional<double> expected_exponent;
};

struct ExperimentSetup {
  ScalarFn f0;
  std::size_t d = 1;
  Design design = Design::kUniform;
  double noise_sd = 1.0;
  std::vector<std::size_t> n_grid;  // increasing, at least 4 points
  int replications = 1;
  std::size_t mc_points = 10000;
  std::uint64_t seed = 1;
  int jobs = 0;  // 0: OpenMP default
  std::optional<double> expected_exponent;
};

// One estimator run on `data`. Fills empirical_risk and s_final of `row`.
using Estimator = std::function<Predictor(const RegressionDataset& data, std::uint64_t seed,
                                          ExperimentRow& row)>;

// Replications run concurrently with seeds derived from (seed, n index,
// replication); rows come back in (n, replication) order.
ExperimentReport rate_experiment(const ExperimentSetup& setup, const Estimator& estimator);

Estimator network_estimator(const FitRecipe& recipe);

nlohmann::json to_json(const SlopeFit& s);

}  // namespace relunet

#endif  // RELUNET_REGRESSION_HPP_
