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

#include "relunet/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "relunet/constructions.hpp"
#include "relunet/errors.hpp"

namespace relunet {

std::vector<double> effective_smoothness(std::span<const double> beta) {
  if (beta.empty()) throw DomainError("effective_smoothness: empty smoothness sequence");
  for (double b : beta) {
    if (!(b > 0.0)) throw DomainError("effective_smoothness: smoothness indices must be positive");
  }
  std::vector<double> out(beta.size());
  double tail = 1.0;
  for (std::size_t i = beta.size(); i-- > 0;) {
    out[i] = beta[i] * tail;
    tail *= std::min(beta[i], 1.0);
  }
  return out;
}

RatePhi rate_phi(double n, std::span<const double> beta, std::span<const double> t) {
  if (beta.size() != t.size()) throw ShapeError("rate_phi: beta and t differ in length");
  if (!(n >= 1.0)) throw DomainError("rate_phi: n must be at least 1");
  const auto star = effective_smoothness(beta);
  RatePhi out{-1.0, 0};
  for (std::size_t i = 0; i < star.size(); ++i) {
    const double v = std::pow(n, -2.0 * star[i] / (2.0 * star[i] + t[i]));
    if (v > out.phi) out = {v, i};
  }
  return out;
}

double rate_exponent(std::span<const double> beta, std::span<const double> t) {
  if (beta.size() != t.size()) throw ShapeError("rate_exponent: beta and t differ in length");
  const auto star = effective_smoothness(beta);
  double e = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < star.size(); ++i) e = std::min(e, 2.0 * star[i] / (2.0 * star[i] + t[i]));
  return -e;
}

double entropy_bound(std::size_t L, std::span<const std::size_t> p, double s, double delta) {
  if (p.size() != L + 2) throw ShapeError("entropy_bound: width vector must have L + 2 entries");
  if (!(delta > 0.0) || s < 0.0) throw DomainError("entropy_bound: needs delta > 0 and s >= 0");
  // log V^2 accumulated in logs; V overflows for wide deep nets.
  double log_v = 0.0;
  for (auto w : p) log_v += std::log(static_cast<double>(w) + 1.0);
  return (s + 1.0) * (std::log(2.0 / delta * static_cast<double>(L + 1)) + 2.0 * log_v);
}

double entropy_bound_refined(std::size_t L, std::size_t p0, std::size_t p_out, double s,
                             double delta) {
  if (!(delta > 0.0) || s < 0.0) throw DomainError("entropy_bound_refined: needs delta > 0 and s >= 0");
  const double l = static_cast<double>(L);
  const double inner = (2.0 * l + 5.0) * std::log(2.0) - std::log(delta) + std::log(l + 1.0) +
                       2.0 * std::log(static_cast<double>(p0)) +
                       2.0 * std::log(static_cast<double>(p_out)) +
                       2.0 * l * std::log(std::max(s, 1.0));
  return (s + 1.0) * inner;
}

double tau_bound(double s, std::size_t L, std::size_t p0, std::size_t p_out, double n, double F,
                 double c_eps) {
  if (s < 0.0 || !(n > 0.0)) throw DomainError("tau_bound: needs s >= 0 and n > 0");
  const double log_term = std::log(n) + static_cast<double>(L) * std::log(s + 1.0) +
                          std::log(static_cast<double>(p0)) + std::log(static_cast<double>(p_out));
  return c_eps * F * F * (s + 1.0) * log_term / n;
}

ClassProfile class_profile(const CompositionSpec& spec) {
  ClassProfile c;
  c.K = 0.0;
  for (const auto& level : spec.levels) {
    c.t.push_back(static_cast<double>(level.t));
    c.beta.push_back(level.beta);
    c.K = std::max(c.K, level.K);
  }
  return c;
}

bool ConditionReport::all_hold() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.holds; });
}

ConditionReport check_architecture_conditions(const Architecture& arch, const ClassProfile& cls,
                                              double n, const ConditionBands& bands) {
  if (arch.p.size() != arch.L + 2) throw ShapeError("architecture: width vector must have L + 2 entries");
  if (cls.t.size() != cls.beta.size() || cls.t.empty()) throw ShapeError("class profile: t and beta must match");
  const double inf = std::numeric_limits<double>::infinity();
  ConditionReport r;
  r.n = n;
  r.phi = rate_phi(n, cls.beta, cls.t).phi;
  r.n_phi = n * r.phi;

  const double f_min = std::max(cls.K, 1.0);
  r.conditions.push_back({"sup_bound", arch.F >= f_min, arch.F, f_min, inf, "F >= max(K, 1)"});

  double depth_min = 0.0;
  for (std::size_t i = 0; i < cls.t.size(); ++i) {
    depth_min += std::log2(std::max(4.0 * cls.t[i], 4.0 * cls.beta[i]));
  }
  depth_min *= std::log2(n);
  const double depth_max = bands.upper * r.n_phi;
  const double L = static_cast<double>(arch.L);
  std::ostringstream note;
  note << "upper side L <= " << bands.upper << " n phi_n = " << depth_max
       << (L <= depth_max ? " holds" : " fails") << " (not part of the verdict)";
  r.conditions.push_back({"depth", L >= depth_min, L, depth_min, depth_max, note.str()});

  std::size_t min_width = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 1; i <= arch.L; ++i) min_width = std::min(min_width, arch.p[i]);
  const double w = arch.L == 0 ? 0.0 : static_cast<double>(min_width);
  r.conditions.push_back({"width", r.n_phi <= bands.upper * w, w, r.n_phi / bands.upper, inf,
                          "n phi_n <= upper * min_i p_i"});

  const double target = r.n_phi * std::log(n);
  r.conditions.push_back({"sparsity",
                          arch.s >= bands.lower * target && arch.s <= bands.upper * target, arch.s,
                          bands.lower * target, bands.upper * target, "s ~ n phi_n log n"});
  return r;
}

nlohmann::json to_json(const ConditionReport& report) {
  nlohmann::json j;
  j["n"] = report.n;
  j["phi_n"] = report.phi;
  j["n_phi_n"] = report.n_phi;
  j["all_hold"] = report.all_hold();
  auto& list = j["conditions"] = nlohmann::json::array();
  for (const auto& c : report.conditions) {
    nlohmann::json e{{"name", c.name}, {"holds", c.holds}, {"value", c.value}, {"lower", c.lower}};
    // JSON has no infinity.
    e["upper"] = std::isfinite(c.upper) ? nlohmann::json(c.upper) : nlohmann::json(nullptr);
    e["note"] = c.note;
    list.push_back(std::move(e));
  }
  return j;
}

}  // namespace relunet
