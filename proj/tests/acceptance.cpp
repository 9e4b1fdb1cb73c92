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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any selected criterion fails.
//
//   relunet_acceptance            criteria 1-10 and 12
//   relunet_acceptance 11         the stochastic network-vs-wavelet comparison
//   relunet_acceptance 3 5 9      any subset

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "relunet/calculus.hpp"
#include "relunet/cli.hpp"
#include "relunet/constructions.hpp"
#include "relunet/grid.hpp"
#include "relunet/kernels.hpp"
#include "relunet/multi_index.hpp"
#include "relunet/rates.hpp"
#include "relunet/regression.hpp"
#include "relunet/targets.hpp"
#include "relunet/wavelet.hpp"
#include "support.hpp"

using namespace relunet;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Net output coordinate k at every grid point, against an independent oracle.
double worst_error(const SparseNetwork& net, const PointSet& pts,
                   const std::function<double(std::span<const double>, std::size_t)>& oracle) {
  const auto y = evaluate_batch(net, pts);
  const std::size_t out = net.output_dim();
  double worst = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t k = 0; k < out; ++k) worst = std::max(worst, std::abs(y[i * out + k] - oracle(pts.point(i), k)));
  }
  return worst;
}

// Knot-aligned grid plus off-grid Halton points.
PointSet probe(std::size_t r, std::size_t per_axis) {
  auto pts = uniform_grid(r, per_axis).points;
  const auto extra = halton_points(r, 20000).points;
  pts.coords.insert(pts.coords.end(), extra.coords.begin(), extra.coords.end());
  return pts;
}

double product(std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= v;
  return p;
}

Outcome mult_bound() {
  Outcome o;
  const auto grid = uniform_grid(2, 257);
  double worst_ratio = 0.0;
  for (int m = 2; m <= 10; ++m) {
    const auto c = build_mult(m);
    const double e = worst_error(c.net, grid.points, [](auto x, std::size_t) { return x[0] * x[1]; });
    worst_ratio = std::max(worst_ratio, e / std::ldexp(1.0, -m));
    if (e > std::ldexp(1.0, -m)) o.pass = false;
    const auto y = evaluate_batch(c.net, grid.points);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const auto x = grid.points.point(i);
      if ((x[0] == 0.0 || x[1] == 0.0) && y[i] != 0.0) o.pass = false;
    }
  }
  o.detail = "max error / 2^-m = " + fmt("%.4f", worst_ratio) + " over m = 2..10";
  return o;
}

Outcome mult_r_bound() {
  Outcome o;
  std::mt19937_64 rng(12);
  for (int r : {2, 3, 4}) {
    const auto c = build_mult_r(8, r);
    const std::size_t per_axis = r == 2 ? 257 : r == 3 ? 33 : 17;
    const auto pts = probe(static_cast<std::size_t>(r), per_axis);
    const double e = worst_error(c.net, pts, [](auto x, std::size_t) { return product(x); });
    const double bound = r * r * std::ldexp(1.0, -8);
    if (e > bound) o.pass = false;
    const auto grid = uniform_grid(static_cast<std::size_t>(r), per_axis);
    const auto y = evaluate_batch(c.net, grid.points);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const auto x = grid.points.point(i);
      if (std::find(x.begin(), x.end(), 0.0) != x.end() && y[i] != 0.0) o.pass = false;
    }
    o.detail += "r=" + std::to_string(r) + " err/bound " + fmt("%.2g", e / bound) + "; ";
  }
  return o;
}

// {0..top}^r filtered by degree, independent of the library enumeration.
std::set<std::vector<int>> brute_indices(std::size_t r, double gamma) {
  std::set<std::vector<int>> out;
  const int top = static_cast<int>(std::ceil(gamma)) + 1;
  std::vector<int> a(r, 0);
  while (true) {
    int d = 0;
    for (int v : a) d += v;
    if (d < gamma) out.insert(a);
    std::size_t j = 0;
    while (j < r && ++a[j] > top) a[j++] = 0;
    if (j == r) break;
  }
  return out;
}

Outcome mon_bound() {
  Outcome o;
  const auto pts = probe(2, 129);
  for (double gamma : {1.5, 2.5}) {
    const auto c = build_mon(8, gamma, 2);
    const auto idx = multi_indices_below(2, gamma);
    const auto brute = brute_indices(2, gamma);
    std::set<std::vector<int>> lib;
    for (const auto& a : idx) lib.insert(std::vector<int>(a.begin(), a.end()));
    if (lib != brute || c.net.output_dim() != brute.size()) o.pass = false;
    const double e = worst_error(c.net, pts, [&](auto x, std::size_t k) {
      return std::pow(x[0], idx[k][0]) * std::pow(x[1], idx[k][1]);
    });
    const double bound = gamma * gamma * std::ldexp(1.0, -8);
    if (e > bound) o.pass = false;
    o.detail += "gamma=" + fmt("%.1f", gamma) + " C=" + std::to_string(brute.size()) + " err/bound " +
                fmt("%.2g", e / bound) + "; ";
  }
  return o;
}

Outcome hat_products() {
  Outcome o;
  const int m = 8;
  for (int r : {1, 2}) {
    const auto grid = uniform_grid(static_cast<std::size_t>(r), r == 1 ? 4097 : 257);
    const auto pts = probe(static_cast<std::size_t>(r), r == 1 ? 4097 : 257);
    for (int M : {2, 4}) {
      const auto c = build_hat(M, m, r);
      // Grid points l in {0..M}^r, first coordinate slowest.
      std::vector<std::vector<int>> ls;
      for (int a = 0; a <= M; ++a) {
        if (r == 1) {
          ls.push_back({a});
          continue;
        }
        for (int b = 0; b <= M; ++b) ls.push_back({a, b});
      }
      const auto hat = [&](std::span<const double> x, std::size_t k) {
        double p = 1.0;
        for (int j = 0; j < r; ++j) p *= std::max(1.0 / M - std::abs(x[j] - ls[k][j] / static_cast<double>(M)), 0.0);
        return p;
      };
      const double e = worst_error(c.net, pts, hat);
      const double bound = r * r * std::ldexp(1.0, -m);
      if (e > bound) o.pass = false;
      const auto y = evaluate_batch(c.net, grid.points);
      for (std::size_t i = 0; i < grid.points.size(); ++i) {
        for (std::size_t k = 0; k < ls.size(); ++k) {
          if (hat(grid.points.point(i), k) == 0.0 && y[i * ls.size() + k] != 0.0) o.pass = false;
        }
      }
      const double s_bound = 49.0 * r * r * std::pow(M + 1.0, r) * (1 + (m + 5) * ceil_log2(r));
      const auto s = count_active(c.net).active;
      if (static_cast<double>(s) > s_bound) o.pass = false;
      o.detail += "r=" + std::to_string(r) + ",M=" + std::to_string(M) + " err/bound " + fmt("%.2g", e / bound) +
                  " s=" + std::to_string(s) + "; ";
    }
  }
  return o;
}

Outcome holder_certificate() {
  Outcome o;
  const int m = 10;
  const double K = 1.0;
  const auto f = holder_target({{"name", "x_one_minus_x"}}, 2.0, K);
  const auto grid = uniform_grid(1, 4097);
  for (long long N : {8LL, 16LL, 32LL}) {
    const auto c = build_holder_net(f, m, N);
    const std::size_t depth = 8 + (m + 5) * (1 + ceil_log2(2.0));
    const double s_bound = 141.0 * 64.0 * static_cast<double>(N) * 16.0;
    const double e_bound = (2 * K + 1) * (1 + 1 + 4) * 6.0 * static_cast<double>(N) * std::ldexp(1.0, -m) +
                           9.0 / static_cast<double>(N * N);
    const double e = worst_error(c.net, grid.points, [](auto x, std::size_t) { return x[0] * (1.0 - x[0]); });
    const auto s = count_active(c.net).active;
    if (c.net.depth() != depth || static_cast<double>(s) > s_bound || e > e_bound) o.pass = false;
    o.detail += "N=" + std::to_string(N) + " depth " + std::to_string(c.net.depth()) + " err " + fmt("%.3g", e) +
                "/" + fmt("%.3g", e_bound) + "; ";
  }
  return o;
}

Outcome local_taylor() {
  Outcome o;
  struct Case {
    const char* name;
    std::size_t r;
    double K;
    json params;
    std::function<double(std::span<const double>)> f;
  };
  const double pi = std::numbers::pi;
  const std::vector<Case> cases{
      {"x_one_minus_x", 1, 1.0, json::object(), [](auto x) { return x[0] * (1.0 - x[0]); }},
      {"sin_pi", 1, 1.0 + pi + pi * pi, json::object(), [pi](auto x) { return std::sin(pi * x[0]); }},
      {"product", 2, 5.0, {{"r", 2}}, [](auto x) { return x[0] * x[1]; }},
  };
  double worst_ratio = 0.0;
  for (const auto& c : cases) {
    const auto f = holder_target({{"name", c.name}, {"params", c.params}}, 2.0, c.K);
    const auto grid = uniform_grid(c.r, c.r == 1 ? 2049 : 129);
    for (int M : {2, 4, 8, 16}) {
      double e = 0.0;
      for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const auto x = grid.points.point(i);
        e = std::max(e, std::abs(local_taylor_ref(f, M, x) - c.f(x)));
      }
      const double bound = c.K / (M * M);
      worst_ratio = std::max(worst_ratio, e / bound);
      if (e > bound) o.pass = false;
    }
  }
  std::mt19937_64 rng(6);
  double pu = 0.0;
  for (int M : {2, 4, 8, 16}) {
    for (int i = 0; i < 200; ++i) {
      const auto x = relunet::testing::random_point(rng, 2);
      double s = 0.0;
      for (int a = 0; a <= M; ++a) {
        for (int b = 0; b <= M; ++b) s += reference_hat(M, std::vector<int>{a, b}, x);
      }
      pu = std::max(pu, std::abs(s - 1.0));
    }
  }
  if (pu > 1e-12) o.pass = false;
  o.detail = "max err / K M^-2 = " + fmt("%.4f", worst_ratio) + ", partition of unity defect " + fmt("%.2g", pu);
  return o;
}

std::size_t nnz(std::span<const double> v) {
  return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

// Random transform chains; arithmetic and values checked against dense oracles.
Outcome calculus_preservation() {
  using relunet::testing::dense_evaluate;
  using relunet::testing::max_abs_diff;
  using relunet::testing::random_network;
  using relunet::testing::random_point;
  using relunet::testing::random_widths;
  Outcome o;
  std::mt19937_64 rng(7);
  int bad_values = 0, bad_shape = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto p = random_widths(rng, 3, 5);
    const auto f = random_network(rng, p, 0.6);
    const auto kind = trial % 4;
    SparseNetwork g = f;
    std::vector<std::size_t> want_widths = p;
    std::size_t want_active = count_active(f).active;
    std::function<std::vector<double>(std::span<const double>)> oracle = [&](auto x) { return dense_evaluate(f, x); };
    SparseNetwork other = f;
    std::vector<double> v;
    if (kind == 0) {
      for (std::size_t j = 1; j + 1 < want_widths.size(); ++j) {
        want_widths[j] += std::uniform_int_distribution<std::size_t>(0, 3)(rng);
      }
      g = enlarge(f, want_widths);
    } else if (kind == 1) {
      const long long q = std::uniform_int_distribution<long long>(0, 3)(rng);
      g = sync_depth(f, q);
      want_widths.insert(want_widths.begin(), static_cast<std::size_t>(q), p.front());
      want_active += static_cast<std::size_t>(q) * p.front();
    } else if (kind == 2) {
      std::vector<std::size_t> pq(p.size());
      for (auto& w : pq) w = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
      pq.front() = p.front();
      other = random_network(rng, pq, 0.6);
      const std::vector<SparseNetwork> nets{f, other};
      g = parallelize(nets);
      for (std::size_t j = 1; j < p.size(); ++j) want_widths[j] = p[j] + pq[j];
      want_active += count_active(other).active;
      oracle = [&](auto x) {
        auto a = dense_evaluate(f, x);
        const auto b = dense_evaluate(other, x);
        a.insert(a.end(), b.begin(), b.end());
        return a;
      };
    } else {
      auto pq = random_widths(rng, 3, 5);
      pq.front() = p.back();
      other = random_network(rng, pq, 0.6);
      v.resize(p.back());
      for (auto& x : v) x = rng() % 3 == 0 ? 0.0 : relunet::testing::uniform(rng, -1.0, 1.0);
      g = compose(other, f, v);
      want_widths.insert(want_widths.end(), pq.begin() + 1, pq.end());
      want_active += count_active(other).active + nnz(v);
      oracle = [&](auto x) {
        auto mid = dense_evaluate(f, x);
        for (std::size_t i = 0; i < mid.size(); ++i) mid[i] = std::max(mid[i] - v[i], 0.0);
        return dense_evaluate(other, mid);
      };
    }
    if (g.widths() != want_widths || g.depth() + 2 != want_widths.size() || count_active(g).active != want_active) {
      ++bad_shape;
    }
    for (int k = 0; k < 5; ++k) {
      // Input-side depth sync is exact on the non-negative orthant only.
      const auto x = random_point(rng, p.front(), kind == 1 ? 0.0 : -1.0, 1.0);
      const double d = max_abs_diff(evaluate(g, x), oracle(x));
      worst = std::max(worst, d);
      if (d > 1e-12) ++bad_values;
    }
  }
  o.pass = bad_values == 0 && bad_shape == 0;
  o.detail = "1000 transforms, worst value diff " + fmt("%.2g", worst) + ", arithmetic mismatches " +
             std::to_string(bad_shape);
  return o;
}

long double entropy_oracle(std::size_t L, const std::vector<std::size_t>& p, double s, double delta) {
  long double V = 1.0L;
  for (auto w : p) V *= static_cast<long double>(w + 1);
  return (s + 1.0L) * std::log(2.0L / delta * (L + 1) * V * V);
}

long double refined_oracle(std::size_t L, std::size_t p0, std::size_t pl, double s, double delta) {
  const long double a = std::pow(2.0L, 2.0L * L + 5) / delta * (L + 1) * p0 * p0 * pl * pl *
                        std::pow(static_cast<long double>(std::max(s, 1.0)), 2.0L * L);
  return (s + 1.0L) * std::log(a);
}

long double tau_oracle(double s, std::size_t L, std::size_t p0, std::size_t pl, double n, double F, double c) {
  const long double inner = n * std::pow(static_cast<long double>(s) + 1.0L, static_cast<long double>(L)) * p0 * pl;
  return c * F * F * (s + 1.0L) * std::log(inner) / n;
}

Outcome entropy_formulas() {
  Outcome o;
  std::mt19937_64 rng(8);
  const auto unif = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const auto pick = [&](std::size_t a, std::size_t b) { return std::uniform_int_distribution<std::size_t>(a, b)(rng); };
  double worst = 0.0;
  int mono_fail = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t L = pick(1, 12);
    std::vector<std::size_t> p(L + 2);
    for (auto& w : p) w = pick(1, 40);
    const double s = std::floor(unif(0.0, 500.0));
    const double delta = std::pow(10.0, unif(-6.0, 0.0));
    const double n = std::floor(std::pow(10.0, unif(2.0, 6.0)));
    const double F = unif(0.5, 10.0);
    const double c = unif(0.1, 5.0);
    const auto rel = [](double a, long double b) { return static_cast<double>(std::abs(a - b) / std::abs(b)); };
    worst = std::max({worst, rel(entropy_bound(L, p, s, delta), entropy_oracle(L, p, s, delta)),
                      rel(entropy_bound_refined(L, p.front(), p.back(), s, delta),
                          refined_oracle(L, p.front(), p.back(), s, delta)),
                      rel(tau_bound(s, L, p.front(), p.back(), n, F, c),
                          tau_oracle(s, L, p.front(), p.back(), n, F, c))});
    // Larger classes and finer resolutions cost more entropy.
    auto wider = p;
    wider[1 + pick(0, L - 1)] += 1;
    if (!(entropy_bound(L, p, s + 1, delta) > entropy_bound(L, p, s, delta))) ++mono_fail;
    if (!(entropy_bound(L, p, s, delta / 2) > entropy_bound(L, p, s, delta))) ++mono_fail;
    if (!(entropy_bound(L, wider, s, delta) > entropy_bound(L, p, s, delta))) ++mono_fail;
    if (!(entropy_bound_refined(L, p.front(), p.back(), s + 1, delta) >
          entropy_bound_refined(L, p.front(), p.back(), s, delta))) {
      ++mono_fail;
    }
    if (!(tau_bound(s, L, p.front(), p.back(), n, 2 * F, c) > tau_bound(s, L, p.front(), p.back(), n, F, c))) {
      ++mono_fail;
    }
    if (!(tau_bound(s + 1, L, p.front(), p.back(), n, F, c) > tau_bound(s, L, p.front(), p.back(), n, F, c))) {
      ++mono_fail;
    }
  }
  o.pass = worst <= 1e-12 && mono_fail == 0;
  o.detail = "worst relative diff " + fmt("%.2g", worst) + ", monotonicity failures " + std::to_string(mono_fail);
  return o;
}

Outcome lattice_scaling() {
  Outcome o;
  const auto h = haar();
  double worst_ratio = 0.0, worst_translate = 0.0;
  QuadOptions opts;
  opts.points_per_axis = 2048;
  for (std::size_t d : {1u, 2u}) {
    for (double alpha : {0.5, 1.0}) {
      const int j0 = h.q + lattice_nu(d) + 2;
      std::vector<double> at_zero;
      for (int j = j0; j <= j0 + 2; ++j) {
        const auto c = build_counterexample(j, alpha, 1.0, d, h);
        const std::vector<long long> zero(d, 0);
        const double base = quad_coeff(h, c.f, lattice_index(h, j, zero), opts).value;
        at_zero.push_back(base);
        const long long count = lattice_count_per_axis(h, j, d);
        for (long long p = 1; p < count; p += std::max<long long>(1, count / 4)) {
          std::vector<long long> pp(d, p);
          pp[0] = count - 1 - p;
          const double v = quad_coeff(h, c.f, lattice_index(h, j, pp), opts).value;
          worst_translate = std::max(worst_translate, std::abs(v - base) / std::abs(base));
        }
      }
      const double want = std::pow(2.0, -(2.0 * alpha + static_cast<double>(d)) / 2.0);
      for (std::size_t k = 0; k + 1 < at_zero.size(); ++k) {
        worst_ratio = std::max(worst_ratio, std::abs(at_zero[k + 1] / at_zero[k] - want) / want);
      }
    }
  }
  o.pass = worst_ratio <= 0.01 && worst_translate <= 1e-6;
  o.detail = "worst ratio deviation " + fmt("%.2g", worst_ratio) + ", worst translate deviation " +
             fmt("%.2g", worst_translate);
  return o;
}

Outcome floor_scaling() {
  Outcome o;
  const auto h = haar();
  std::vector<double> ns;
  for (int e = 8; e <= 16; ++e) ns.push_back(std::ldexp(1.0, e));
  for (std::size_t d : {1u, 2u}) {
    for (double alpha : {0.5, 1.0}) {
      const int j_min = h.q + lattice_nu(d);
      const double K = 1.0 / std::abs(lattice_constant(h, d));
      const auto levels = family_coefficients(h, alpha, K, d, j_min, j_min + 12);
      std::vector<double> floors;
      for (double n : ns) floors.push_back(family_floor(levels, n).floor);
      const auto fit = log_log_slope(ns, floors, 0.0);
      const double want = -2.0 * alpha / (2.0 * alpha + static_cast<double>(d));
      if (fit.degenerate || std::abs(fit.slope - want) > 0.05) o.pass = false;
      o.detail += "d=" + std::to_string(d) + ",a=" + fmt("%.1f", alpha) + " " + fmt("%.3f", fit.slope) + " vs " +
                  fmt("%.3f", want) + "; ";
    }
  }
  return o;
}

Outcome network_vs_wavelet() {
  Outcome o;
  ExperimentSetup setup;
  setup.f0 = [](std::span<const double> x) { return std::abs(x[0] + x[1] + x[2] - 1.5); };
  setup.d = 3;
  setup.n_grid = {512, 1024, 2048, 4096, 8192};
  setup.replications = 10;
  setup.mc_points = 20000;
  setup.seed = 2026;
  FitRecipe recipe;
  const auto net = rate_experiment(setup, network_estimator(recipe));
  const auto wav = rate_experiment(setup, wavelet_estimator(haar(), 1.0));
  const double se = std::hypot(net.slope.std_error, wav.slope.std_error);
  o.pass = !net.slope.degenerate && !wav.slope.degenerate && net.slope.slope <= wav.slope.slope - se;
  o.detail = "network slope " + fmt("%.3f", net.slope.slope) + " +- " + fmt("%.3f", net.slope.std_error) +
             ", wavelet slope " + fmt("%.3f", wav.slope.slope) + " +- " + fmt("%.3f", wav.slope.std_error) +
             ", gap " + fmt("%.3f", wav.slope.slope - net.slope.slope) + " vs combined se " + fmt("%.3f", se);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome cli_determinism() {
  Outcome o;
  const auto root = fs::temp_directory_path() / ("relunet_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const json sim = {{"name", "sim"},
                    {"seed", 99},
                    {"target", {{"name", "lipschitz_abs"}, {"params", {{"r", 2}, {"c", 1.0}}}}},
                    {"n_grid", {64, 128, 256, 512}},
                    {"replications", 2},
                    {"mc_points", 2000},
                    {"architecture", {{"depth", 2}, {"width", 8}}},
                    {"hyper", {{"restarts", 2}, {"epochs", 60}}}};
  json wav = sim;
  wav["name"] = "wav";
  wav.erase("architecture");
  wav.erase("hyper");
  wav["wavelet"] = {{"alpha", 1.0}};
  wav["floor"] = {{"alpha", 1.0}, {"d", 1}, {"n_grid", {256, 1024, 4096, 16384}}};
  std::ofstream(root / "sim.json") << sim.dump(2);
  std::ofstream(root / "wav.json") << wav.dump(2);
  std::ofstream(root / "pts.csv") << "0.1,0.2\n0.5,0.5\n0.9,0.3\n";

  const std::vector<std::string> files{"sim.csv", "wav.csv", "wav_floor.csv", "eval.csv"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    const auto out = root / ("run" + std::to_string(pass));
    std::ostringstream sink, err;
    int rc = 0;
    rc |= run_cli({"simulate", "--config", (root / "sim.json").string(), "--out", out.string()}, sink, err);
    rc |= run_cli({"wavelet", "--config", (root / "wav.json").string(), "--out", out.string()}, sink, err);
    rc |= run_cli({"construct", "mult", "--m", "6", "--out", out.string()}, sink, err);
    std::ostringstream eval;
    rc |= run_cli({"eval", "--net", (out / "mult.net.json").string(), "--points", (root / "pts.csv").string()}, eval,
                  err);
    std::ofstream(out / "eval.csv") << eval.str();
    if (rc != 0) {
      o.pass = false;
      o.detail = "a CLI run failed: " + err.str();
      return o;
    }
    std::vector<std::string> digests;
    for (const auto& f : files) digests.push_back(sha256_hex(slurp(out / f)));
    if (pass == 0) {
      first = digests;
    } else if (digests != first) {
      o.pass = false;
    }
  }
  fs::remove_all(root);
  o.detail = std::to_string(files.size()) + " CSV outputs compared by SHA-256 across two runs";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "mult_error_bound", 10, mult_bound},
      {2, "mult_r_error_bound", 30, mult_r_bound},
      {3, "monomial_error_bound", 30, mon_bound},
      {4, "hat_products", 60, hat_products},
      {5, "holder_net_certificate", 120, holder_certificate},
      {6, "local_taylor_error", 30, local_taylor},
      {7, "calculus_preservation", 60, calculus_preservation},
      {8, "entropy_and_tau_formulas", 5, entropy_formulas},
      {9, "lattice_coefficient_scaling", 120, lattice_scaling},
      {10, "risk_floor_slope", 60, floor_scaling},
      {11, "network_beats_wavelet_slope", 1800, network_vs_wavelet},
      {12, "cli_determinism", 60, cli_determinism},
  };
  std::set<int> chosen;
  for (int i = 1; i < argc; ++i) chosen.insert(std::atoi(argv[i]));
  if (chosen.empty()) {
    for (const auto& c : all) {
      if (c.id != 11) chosen.insert(c.id);
    }
  }
  int failed = 0;
  for (const auto& c : all) {
    if (!chosen.contains(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " (over the " + fmt("%.0f", c.limit_seconds) + " s budget)";
    }
    std::printf("%s %2d %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
