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

#ifndef RELUNET_WAVELET_HPP_
#define RELUNET_WAVELET_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relunet/constructions.hpp"
#include "relunet/regression.hpp"

namespace relunet {

struct WaveletSpec {
  std::string name;
  std::function<double(double)> mother;   // zero outside [0, 2^q]
  std::function<double(double)> scaling;  // zero outside [0, 2^q]
  int q = 0;
  int r = 1;  // smallest positive r with int x^r psi != 0
  double mu0 = 0.0;
  double mu_r = 0.0;
};

// psi = 1 on [0,1/2), -1 on [1/2,1); q = 0, r = 1, mu_0 = 0, mu_1 = -1/4.
WaveletSpec haar();

// Re-derives r, mu_0, mu_r by quadrature and checks the support; throws
// DomainError if the stored values disagree.
void validate(const WaveletSpec& spec);

// nu = ceil(log2 d) + 1
int lattice_nu(std::size_t d);

// j = -1 denotes the scaling function phi(x - k).
struct WaveletIndex {
  int j = 0;
  long long k = 0;
  friend bool operator==(const WaveletIndex&, const WaveletIndex&) = default;
};
using IndexTuple = std::vector<WaveletIndex>;

double basis_value(const WaveletSpec& spec, WaveletIndex idx, double x);
double tensor_value(const WaveletSpec& spec, const IndexTuple& idx, std::span<const double> x);

struct EmpiricalCoefficient {
  double value = 0.0;
  bool design_flagged = false;  // design is not uniform; the estimate is biased
};

// (1/n) sum_i Y_i prod_r psi_{lambda_r}(X_{i,r})
EmpiricalCoefficient empirical_coeff(const WaveletSpec& spec, const RegressionDataset& data,
                                     const IndexTuple& idx);

struct QuadOptions {
  std::size_t points_per_axis = 0;  // 0: 2^12 for d <= 2, 2^8 for d = 3
  std::size_t mc_points = 200000;   // d >= 4
};

struct QuadResult {
  double value = 0.0;
  double std_error = 0.0;  // nonzero only for the Monte Carlo fallback
  std::string method;
};

// Tensor midpoint rule over the support box of the tensor wavelet (d <= 3),
// Halton Monte Carlo beyond.
QuadResult quad_coeff(const WaveletSpec& spec, const ScalarFn& f, const IndexTuple& idx,
                      const QuadOptions& opts = {});

// Every tuple whose coordinates are the scaling functions or wavelets of
// levels 0..J meeting [0,1].
std::vector<IndexTuple> level_indices(const WaveletSpec& spec, std::size_t d, int J);

// Resolution balancing bias 2^{-2 J alpha} and variance 2^{J d} / n.
int balancing_level(std::size_t n, double alpha, std::size_t d);

class WaveletEstimate {
 public:
  WaveletEstimate(WaveletSpec spec, std::vector<IndexTuple> indices, std::vector<double> coeffs);
  double operator()(std::span<const double> x) const;
  std::vector<double> operator()(const PointSet& points) const;
  std::span<const IndexTuple> indices() const { return indices_; }
  std::span<const double> coefficients() const { return coeffs_; }

 private:
  WaveletSpec spec_;
  std::vector<IndexTuple> indices_;
  std::vector<double> coeffs_;
};

// x -> sum_{lambda in I} dhat_lambda prod_r psi_{lambda_r}(x_r)
WaveletEstimate wavelet_estimate(const WaveletSpec& spec, const RegressionDataset& data,
                                 std::vector<IndexTuple> indices);

Estimator wavelet_estimator(const WaveletSpec& spec, double alpha);

struct Counterexample {
  std::function<double(double)> h;  // on [0, d]
  ScalarFn f;                       // h(x_1 + ... + x_d)
  int j = 0;
  double alpha = 1.0;
  double K = 1.0;
  std::size_t d = 1;
};

// f_{j,alpha}(x) = h(x_1 + ... + x_d), h(u) = K 2^{-j alpha - 1} g({2^{j-q-nu} u}).
// g is the r-power bump when mu_0 != 0 and the dr-power bump otherwise.
Counterexample build_counterexample(int j, double alpha, double K, std::size_t d,
                                    const WaveletSpec& spec);

// c(psi, d) with d_{lattice}(f_{j,alpha}) = c K 2^{-j(2 alpha + d)/2}.
double lattice_constant(const WaveletSpec& spec, std::size_t d);

// Lattice tuple (j, 2^{q+nu} p_1), ..., (j, 2^{q+nu} p_d).
IndexTuple lattice_index(const WaveletSpec& spec, int j, std::span<const long long> p);
long long lattice_count_per_axis(const WaveletSpec& spec, int j, std::size_t d);

// sum min(1/n, d_lambda^2)
double risk_floor(std::span<const double> coefficients, double n);

struct LevelCoefficient {
  int j = 0;
  double value = 0.0;    // coefficient at the p = 0 lattice point
  double count = 0.0;    // number of lattice points at level j
};

struct FloorPoint {
  double floor = 0.0;
  int j = 0;
};

// Largest lattice floor over the family f_{j,alpha}, one member per level.
FloorPoint family_floor(std::span<const LevelCoefficient> levels, double n);

// Quadrature lattice coefficients of f_{j,alpha} for j = j_min..j_max.
std::vector<LevelCoefficient> family_coefficients(const WaveletSpec& spec, double alpha, double K,
                                                  std::size_t d, int j_min, int j_max,
                                                  const QuadOptions& opts = {});

}  // namespace relunet

#endif  // RELUNET_WAVELET_HPP_
