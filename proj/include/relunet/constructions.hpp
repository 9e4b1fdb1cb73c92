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

#ifndef RELUNET_CONSTRUCTIONS_HPP_
#define RELUNET_CONSTRUCTIONS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "relunet/certificate.hpp"
#include "relunet/multi_index.hpp"
#include "relunet/network.hpp"

namespace relunet {

struct Construction {
  SparseNetwork net;
  Certificate cert;
};

// Scalar references for the tooth map T^k and the triangle wave R^k = T^k o ... o T^1.
double tri_wave_ref(int k, double x);
double r_wave_ref(int k, double x);

// smallest q >= 0 with 2^q >= x
int ceil_log2(double x);

// Approximates xy on [0,1]^2 with error 2^-m; depth m + 4, widths (2, 6, ..., 6, 2, 1, 1, 1).
Construction build_mult(int m);

// Product of the input coordinates listed in `factor_columns` (repeats allowed),
// padded with constant ones to a power of two. Depth (m + 5) ceil(log2 k).
SparseNetwork build_mult_tree(int m, std::span<const std::size_t> factor_columns,
                              std::size_t input_dim);

Construction build_mult_r(int m, int r);

// Vector of monomials x^alpha, |alpha| < gamma, in multi_indices_below order.
Construction build_mon(int m, double gamma, int r);

// Approximate products of hats prod_j (1/M - |x_j - l_j/M|)_+ for every grid
// point l in {0..M}^r, first coordinate varying slowest.
Construction build_hat(int M, int m, int r);

inline constexpr long long kMaxHatGridPoints = 1000000;

using ScalarFn = std::function<double(std::span<const double> x)>;
using PartialFn = std::function<double(std::span<const int> alpha, std::span<const double> x)>;

// f in the beta-Hoelder ball of radius K on [0,1]^r.
struct HolderTarget {
  std::size_t r = 1;
  double beta = 1.0;
  double K = 1.0;
  ScalarFn value;
  PartialFn partial;  // empty: central finite differences are used instead
  nlohmann::json description = nlohmann::json::object();
};

inline constexpr double kFiniteDifferenceStep = 1e-5;

double partial_derivative(const HolderTarget& f, std::span<const int> alpha, std::span<const double> a);

struct TaylorPolynomial {
  std::vector<MultiIndex> indices;
  std::vector<double> coeffs;  // x^gamma coefficients
  DerivativeProvenance provenance = DerivativeProvenance::kExact;

  double operator()(std::span<const double> x) const;
};

// Monomial expansion of the Taylor polynomial of order < beta around a.
TaylorPolynomial taylor_poly(const HolderTarget& f, std::span<const double> a);

// (1 - M |x_j - l_j/M|)_+ products summed against the local Taylor polynomials.
double local_taylor_ref(const HolderTarget& f, int M, std::span<const double> x);
double reference_hat(int M, std::span<const int> l, std::span<const double> x);

struct HolderNetOptions {
  // When set, the output is multiplied by min(1, sup_norm / max|net|) with the
  // maximum taken over the standard grid, and the error claim doubles.
  std::optional<double> sup_norm;
};

Construction build_holder_net(const HolderTarget& f, int m, long long N,
                              const HolderNetOptions& options = {});

// Smallest admissible N for build_holder_net.
double holder_net_min_N(std::size_t r, double beta, double K);

struct Component {
  std::vector<std::size_t> vars;  // subset of the level input coordinates
  HolderTarget g;
};

struct CompositionLevel {
  std::size_t t = 1;
  double beta = 1.0;
  double K = 1.0;
  std::vector<Component> components;
};

// f = g_q o ... o g_0 on [0,1]^input_dim; g_0 acts on [0,1], g_i on [-K_{i-1}, K_{i-1}].
struct CompositionSpec {
  std::size_t input_dim = 1;
  std::vector<CompositionLevel> levels;
  nlohmann::json description = nlohmann::json::object();

  std::size_t q() const { return levels.size() - 1; }
};

void validate(const CompositionSpec& spec);
double evaluate_composite(const CompositionSpec& spec, std::span<const double> x);

struct RescaledLevel {
  double radius = 1.0;
  std::vector<HolderTarget> h;
};

std::vector<RescaledLevel> rescale_components(const CompositionSpec& spec);
double evaluate_rescaled(const CompositionSpec& spec, const std::vector<RescaledLevel>& h,
                         std::span<const double> x);

double composition_error_bound(std::span<const double> per_level_errors, const CompositionSpec& spec);

Construction build_composite_net(const CompositionSpec& spec, int m,
                                 std::span<const long long> N_per_level);

}  // namespace relunet

#endif  // RELUNET_CONSTRUCTIONS_HPP_
