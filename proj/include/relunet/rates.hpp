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

#ifndef RELUNET_RATES_HPP_
#define RELUNET_RATES_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace relunet {

struct CompositionSpec;

// beta*_i = beta_i prod_{l > i} min(beta_l, 1)
std::vector<double> effective_smoothness(std::span<const double> beta);

struct RatePhi {
  double phi = 1.0;
  std::size_t level = 0;  // attaining index, smallest on ties
};

// max_i n^(-2 beta*_i / (2 beta*_i + t_i))
RatePhi rate_phi(double n, std::span<const double> beta, std::span<const double> t);

// Log-log slope of phi_n, i.e. -min_i 2 beta*_i / (2 beta*_i + t_i).
double rate_exponent(std::span<const double> beta, std::span<const double> t);

// (s + 1) log(2 delta^-1 (L + 1) V^2), V = prod_{l=0}^{L+1} (p_l + 1).
double entropy_bound(std::size_t L, std::span<const std::size_t> p, double s, double delta);

// (s + 1) log(2^(2L+5) delta^-1 (L + 1) p_0^2 p_{L+1}^2 max(s, 1)^(2L))
double entropy_bound_refined(std::size_t L, std::size_t p0, std::size_t p_out, double s,
                             double delta);

// C_eps F^2 (s + 1) log(n (s + 1)^L p_0 p_{L+1}) / n
double tau_bound(double s, std::size_t L, std::size_t p0, std::size_t p_out, double n, double F,
                 double c_eps);

struct Architecture {
  std::size_t L = 0;
  std::vector<std::size_t> p;  // p_0, ..., p_{L+1}
  double s = 0.0;
  double F = 1.0;
};

struct ClassProfile {
  std::vector<double> t;
  std::vector<double> beta;
  double K = 1.0;
};

ClassProfile class_profile(const CompositionSpec& spec);

// Constants hidden behind the asymptotic relations; a relation a ~ b is read
// as lower * b <= a <= upper * b.
struct ConditionBands {
  double lower = 0.25;
  double upper = 4.0;
};

struct ConditionResult {
  std::string name;
  bool holds = false;
  double value = 0.0;
  double lower = 0.0;  // threshold the value is compared against from below
  double upper = 0.0;  // and from above (infinity when one-sided)
  std::string note;
};

struct ConditionReport {
  double n = 0.0;
  double phi = 0.0;
  double n_phi = 0.0;
  std::vector<ConditionResult> conditions;
  bool all_hold() const;
};

// Conditions (i)-(iv) on the architecture of the main risk bound. In (ii) only
// the lower side decides the verdict; L <= upper * n phi_n is reported in `note`.
ConditionReport check_architecture_conditions(const Architecture& arch, const ClassProfile& cls,
                                              double n, const ConditionBands& bands = {});

nlohmann::json to_json(const ConditionReport& report);

}  // namespace relunet

#endif  // RELUNET_RATES_HPP_
