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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "relunet/calculus.hpp"
#include "relunet/constructions.hpp"
#include "relunet/errors.hpp"
#include "relunet/grid.hpp"
#include "relunet/kernels.hpp"
#include "relunet/targets.hpp"
#include "support.hpp"

using namespace relunet;
using nlohmann::json;
using relunet::testing::random_point;

namespace {

double net1(const SparseNetwork& net, std::vector<double> x) { return evaluate(net, x)[0]; }

HolderTarget named(const std::string& name, double beta, double K, json params = json::object()) {
  return holder_target({{"name", name}, {"params", params}}, beta, K);
}

// Brute force: every tuple in {0..top}^r filtered by degree.
std::size_t count_below(std::size_t r, double gamma) {
  const int top = static_cast<int>(std::ceil(gamma)) + 1;
  std::vector<int> a(r, 0);
  std::size_t n = 0;
  while (true) {
    int d = 0;
    for (int v : a) d += v;
    if (d < gamma) ++n;
    std::size_t j = 0;
    while (j < r && ++a[j] > top) a[j++] = 0;
    if (j == r) break;
  }
  return n;
}

}  // namespace

TEST_SUITE("multi_index") {
  TEST_CASE("count matches brute force enumeration") {
    for (std::size_t r = 1; r <= 4; ++r) {
      for (double g : {0.5, 1.0, 1.5, 2.0, 2.5, 3.7}) CHECK(multi_indices_below(r, g).size() == count_below(r, g));
    }
  }

  TEST_CASE("graded order") {
    const auto idx = multi_indices_below(2, 2.5);
    const std::vector<MultiIndex> want{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    CHECK(idx == want);
    CHECK(multi_indices_below(3, 1.0).size() == 1);
    CHECK(max_degree_below(2.0) == 1);
    CHECK(max_degree_below(2.5) == 2);
  }
}

TEST_SUITE("waves") {
  TEST_CASE("R^k at dyadic points") {
    for (int k = 1; k <= 3; ++k) {
      for (int l = 0; l <= (1 << k); ++l) {
        const double want = l % 2 ? std::ldexp(1.0, -2 * k) : 0.0;
        CHECK(r_wave_ref(k, std::ldexp(l, -k)) == want);
      }
    }
    CHECK(r_wave_ref(1, 0.5) == 0.25);
  }

  TEST_CASE("partial sums interpolate x(1-x)") {
    const int m = 4;
    for (int l = 0; l <= 16; ++l) {
      const double x = std::ldexp(l, -m);
      double s = 0.0;
      for (int k = 1; k <= m; ++k) s += r_wave_ref(k, x);
      CHECK(std::abs(s - x * (1.0 - x)) <= 1e-15);
    }
  }
}

TEST_SUITE("mult") {
  TEST_CASE("structure and error") {
    for (int m : {1, 3, 6}) {
      const auto c = build_mult(m);
      CHECK(c.net.depth() == static_cast<std::size_t>(m + 4));
      CHECK(c.net.max_hidden_width() == 6);
      CHECK(count_active(c.net).active <= c.cert.sparsity_bound);
      const auto g = uniform_grid(2, 65);
      const auto e = sup_error(c.net, g.points, reference_target(c.cert.target).fn);
      CHECK(e.value <= std::ldexp(1.0, -m));
      const auto y = evaluate_batch(c.net, g.points);
      for (double v : y) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    CHECK_THROWS_AS(build_mult(0), DomainError);
  }

  TEST_CASE("zero boundary at dyadic points") {
    const auto c = build_mult(8);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
      const double x = std::ldexp(std::floor(testing::uniform(rng, 0.0, 1.0) * 1048576.0), -20);
      CHECK(net1(c.net, {0.0, x}) == 0.0);
      CHECK(net1(c.net, {x, 0.0}) == 0.0);
    }
    CHECK(std::abs(net1(c.net, {1.0, 1.0}) - 1.0) <= std::ldexp(1.0, -8));
  }

  TEST_CASE("Mult^r") {
    const auto one = build_mult_r(5, 1);
    CHECK(one.net.depth() == 0);
    CHECK(net1(one.net, {0.37}) == 0.37);
    const auto c = build_mult_r(8, 3);
    CHECK(c.net.depth() == 26);
    CHECK(c.net.max_hidden_width() <= 18);
    CHECK(count_active(c.net).active <= c.cert.sparsity_bound);
    std::mt19937_64 rng(2);
    for (int i = 0; i < 200; ++i) {
      const auto x = random_point(rng, 3);
      CHECK(std::abs(net1(c.net, x) - x[0] * x[1] * x[2]) <= 9.0 * std::ldexp(1.0, -8));
      auto z = x;
      z[i % 3] = 0.0;
      for (auto& v : z) v = std::ldexp(std::floor(v * 65536.0), -16);
      CHECK(net1(c.net, z) == 0.0);
    }
  }

  TEST_CASE("Mon") {
    const auto c = build_mon(8, 2.5, 2);
    CHECK(c.net.output_dim() == 6);
    CHECK(c.net.depth() == 1 + 13 * 2);
    CHECK(c.net.max_hidden_width() <= c.cert.width_bound);
    const auto g = uniform_grid(2, 33);
    CHECK(sup_error(c.net, g.points, reference_target(c.cert.target).fn).value <= 6.25 * std::ldexp(1.0, -8));
    const auto zero = evaluate(c.net, std::vector<double>{0.0, 0.0});
    CHECK(zero[0] == 1.0);
    for (std::size_t k = 1; k < zero.size(); ++k) CHECK(zero[k] == 0.0);
    const auto low = build_mon(8, 1.0, 3);
    CHECK(low.net.output_dim() == 1);
    CHECK(low.net.depth() == 1);
    CHECK(net1(low.net, {0.2, 0.5, 0.9}) == 1.0);
  }
}

TEST_SUITE("hat") {
  TEST_CASE("one dimensional hats are exact") {
    const auto c = build_hat(4, 8, 1);
    CHECK(c.net.depth() == 2);
    const auto y = evaluate(c.net, std::vector<double>{0.5});
    CHECK(std::abs(y[2] - 0.25) <= 1e-12);
  }

  TEST_CASE("two dimensional hats") {
    const auto c = build_hat(2, 8, 2);
    CHECK(c.net.depth() == c.cert.depth);
    CHECK(count_active(c.net).active <= c.cert.sparsity_bound);
    const auto g = uniform_grid(2, 41);
    CHECK(sup_error(c.net, g.points, reference_target(c.cert.target).fn).value <= 4.0 * std::ldexp(1.0, -8));
    // Support: zero outside the 1/M ball of each grid point.
    const auto y = evaluate_batch(c.net, g.points);
    for (std::size_t i = 0; i < g.points.size(); ++i) {
      const auto x = g.points.point(i);
      for (int l0 = 0; l0 <= 2; ++l0) {
        for (int l1 = 0; l1 <= 2; ++l1) {
          const bool outside = std::abs(x[0] - l0 / 2.0) >= 0.5 || std::abs(x[1] - l1 / 2.0) >= 0.5;
          if (outside) CHECK(y[i * 9 + static_cast<std::size_t>(l0 * 3 + l1)] == 0.0);
        }
      }
    }
  }

  TEST_CASE("grid guard") { CHECK_THROWS_AS(build_hat(1000, 4, 2), DomainError); }
}

TEST_SUITE("taylor") {
  TEST_CASE("polynomial is its own expansion") {
    HolderTarget f;
    f.r = 1;
    f.beta = 3.0;
    f.value = [](std::span<const double> x) { return x[0] * x[0]; };
    f.partial = [](std::span<const int> a, std::span<const double> x) {
      return a[0] == 0 ? x[0] * x[0] : a[0] == 1 ? 2.0 * x[0] : a[0] == 2 ? 2.0 : 0.0;
    };
    const std::vector<double> a{0.5};
    const auto p = taylor_poly(f, a);
    REQUIRE(p.coeffs.size() == 3);
    CHECK(p.coeffs[0] == 0.0);
    CHECK(p.coeffs[1] == 0.0);
    CHECK(p.coeffs[2] == 1.0);
    CHECK(p.provenance == DerivativeProvenance::kExact);
  }

  TEST_CASE("constant") {
    const auto f = named("constant", 2.0, 1.0, {{"value", 0.3}, {"r", 2}});
    const auto p = taylor_poly(f, std::vector<double>{0.2, 0.7});
    CHECK(p.coeffs[0] == 0.3);
    for (std::size_t k = 1; k < p.coeffs.size(); ++k) CHECK(p.coeffs[k] == 0.0);
  }

  TEST_CASE("sin residual obeys the Hoelder remainder") {
    const double K = std::numbers::pi * std::numbers::pi;
    const auto f = named("sin_pi", 2.0, K);
    const auto p = taylor_poly(f, std::vector<double>{0.0});
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      CHECK(std::abs(f.value(std::vector<double>{x}) - p(std::vector<double>{x})) <= K * x * x + 1e-15);
    }
  }

  TEST_CASE("finite differences are flagged") {
    auto f = named("x_one_minus_x", 2.0, 1.0);
    f.partial = nullptr;
    const auto p = taylor_poly(f, std::vector<double>{0.3});
    CHECK(p.provenance == DerivativeProvenance::kFiniteDifference);
    CHECK(std::abs(p.coeffs[1] - 0.4) <= 1e-6);
  }

  TEST_CASE("coefficient bounds") {
    const auto f = named("sin_pi", 3.0, std::pow(std::numbers::pi, 2));
    for (double a : {0.0, 0.25, 0.5, 1.0}) {
      const auto p = taylor_poly(f, std::vector<double>{a});
      double sum = 0.0;
      for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
        CHECK(std::abs(p.coeffs[k]) <= f.K / factorial(p.indices[k]) + 1e-12);
        sum += std::abs(p.coeffs[k]);
      }
      CHECK(sum <= f.K * std::exp(1.0));
    }
  }

  TEST_CASE("partition of unity and local Taylor error") {
    std::mt19937_64 rng(4);
    for (int M : {2, 5}) {
      for (int i = 0; i < 200; ++i) {
        const auto x = random_point(rng, 2);
        double s = 0.0;
        for (int a = 0; a <= M; ++a) {
          for (int b = 0; b <= M; ++b) s += reference_hat(M, std::vector<int>{a, b}, x);
        }
        CHECK(std::abs(s - 1.0) <= 1e-12);
      }
    }
    const auto lin = named("linear", 2.0, 3.0, {{"weights", {0.5, -0.25}}, {"bias", 0.1}});
    for (int i = 0; i < 50; ++i) {
      const auto x = random_point(rng, 2);
      CHECK(std::abs(local_taylor_ref(lin, 3, x) - lin.value(x)) <= 1e-12);
    }
    const auto f = named("x_one_minus_x", 2.0, 1.0);
    for (int M : {2, 4, 8}) {
      double worst = 0.0;
      for (int i = 0; i <= 1024; ++i) {
        const std::vector<double> x{i / 1024.0};
        worst = std::max(worst, std::abs(local_taylor_ref(f, M, x) - f.value(x)));
      }
      CHECK(worst <= 1.0 / (M * M));
    }
  }
}

TEST_SUITE("holder") {
  TEST_CASE("depth closed form") {
    struct Case {
      std::size_t r;
      double beta;
      int m;
    };
    for (const auto& c : {Case{1, 1.0, 6}, Case{2, 2.0, 8}, Case{1, 2.5, 8}}) {
      json params = c.r == 1 ? json{{"weights", {0.5}}} : json{{"weights", {0.25, 0.25}}};
      const auto f = named("linear", c.beta, 1.0, params);
      const long long N = static_cast<long long>(std::ceil(holder_net_min_N(c.r, c.beta, 1.0)));
      const auto out = build_holder_net(f, c.m, N);
      const int lg = ceil_log2(std::max<double>(static_cast<double>(c.r), c.beta));
      CHECK(out.net.depth() == static_cast<std::size_t>(8 + (c.m + 5) * (1 + lg)));
      CHECK(out.cert.depth == out.net.depth());
      CHECK(out.net.max_hidden_width() <= out.cert.width_bound);
      CHECK(count_active(out.net).active <= out.cert.sparsity_bound);
    }
  }

  TEST_CASE("x(1-x) within the certificate") {
    const auto f = named("x_one_minus_x", 2.0, 1.0);
    const auto out = build_holder_net(f, 10, 8);
    const auto g = standard_grid(1, 10);
    const auto e = sup_error(out.net, g.points, reference_target(out.cert.target).fn);
    CHECK(e.value <= out.cert.sup_error_bound);
  }

  TEST_CASE("zero function") {
    const auto out = build_holder_net(named("zero", 1.0, 1.0), 8, 6);
    const auto g = uniform_grid(1, 257);
    const auto y = evaluate_batch(out.net, g.points);
    for (double v : y) CHECK(std::abs(v) <= out.cert.sup_error_bound);
  }

  TEST_CASE("refusal") {
    try {
      build_holder_net(named("x_one_minus_x", 2.0, 1.0), 10, 4);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("(beta+1)^r v (K+1)e^r") != std::string::npos);
    }
  }

  TEST_CASE("sup rescale keeps the output below the norm") {
    HolderNetOptions opt;
    opt.sup_norm = 0.25;
    const auto out = build_holder_net(named("x_one_minus_x", 2.0, 1.0), 10, 8, opt);
    const auto g = standard_grid(1, 10);
    const auto y = evaluate_batch(out.net, g.points);
    for (double v : y) CHECK(std::abs(v) <= 0.25 + 1e-12);
    CHECK(out.net.sup_bound() == 0.25);
  }
}

TEST_SUITE("composite") {
  CompositionSpec identity_chain(std::size_t levels) {
    CompositionSpec s;
    s.input_dim = 1;
    for (std::size_t i = 0; i < levels; ++i) {
      CompositionLevel l;
      l.t = 1;
      l.beta = 1.0;
      l.K = 1.0;
      l.components.push_back({{0}, named("linear", 1.0, 1.0, {{"weights", {1.0}}})});
      s.levels.push_back(std::move(l));
    }
    return s;
  }

  TEST_CASE("rescaling preserves the composite") {
    for (std::size_t levels : {1, 2, 3}) {
      const auto spec = identity_chain(levels);
      const auto h = rescale_components(spec);
      for (int i = 0; i <= 100; ++i) {
        const std::vector<double> x{i / 100.0};
        CHECK(std::abs(evaluate_rescaled(spec, h, x) - evaluate_composite(spec, x)) <= 1e-12);
      }
    }
  }

  TEST_CASE("rescaled first level maps into the unit interval") {
    CompositionSpec s;
    s.input_dim = 1;
    CompositionLevel l0{1, 1.0, 2.0, {{{0}, named("linear", 1.0, 2.0, {{"weights", {4.0}}, {"bias", -2.0}})}}};
    CompositionLevel l1{1, 1.0, 1.0, {{{0}, named("linear", 1.0, 1.0, {{"weights", {0.5}}})}}};
    s.levels = {l0, l1};
    const auto h = rescale_components(s);
    for (int i = 0; i <= 100; ++i) {
      const double v = h[0].h[0].value(std::vector<double>{i / 100.0});
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    CHECK(h[1].radius == doctest::Approx(4.0));
    s.levels[1].K = 0.5;
    CHECK_THROWS_AS(rescale_components(s), DomainError);
  }

  TEST_CASE("error bound arithmetic") {
    auto spec = identity_chain(2);
    spec.levels[1].beta = 0.5;
    const std::vector<double> errs{0.01, 0.01};
    CHECK(composition_error_bound(errs, spec) == doctest::Approx(std::sqrt(2.0) * (0.1 + 0.01)));
    const std::vector<double> zeros{0.0, 0.0};
    CHECK(composition_error_bound(zeros, spec) == 0.0);
    const auto single = identity_chain(1);
    const std::vector<double> e1{0.3};
    CHECK(composition_error_bound(e1, single) == doctest::Approx(0.3));
  }

  TEST_CASE("bound dominates a perturbed pair") {
    // h0(x) = x/2 + 1/4 (K0 = 1, beta 1), h1(y) = sqrt-ish Hoelder-1/2 map.
    auto spec = identity_chain(2);
    spec.levels[1].beta = 0.5;
    const auto h = rescale_components(spec);
    const double e0 = 0.01;
    const double e1 = 0.01;
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const std::vector<double> x{i / 2000.0};
      const double exact = evaluate_rescaled(spec, h, x);
      const double y = std::clamp(h[0].h[0].value(x) + e0, 0.0, 1.0);
      const double pert = h[1].h[0].value(std::vector<double>{y}) - e1;
      worst = std::max(worst, std::abs(exact - pert));
    }
    const std::vector<double> errs{e0, e1};
    CHECK(worst <= composition_error_bound(errs, spec));
  }

  TEST_CASE("single level reduces to the Hoelder net") {
    CompositionSpec s;
    s.input_dim = 1;
    s.levels.push_back({1, 2.0, 1.0, {{{0}, named("x_one_minus_x", 2.0, 1.0)}}});
    const std::vector<long long> N{8};
    const auto c = build_composite_net(s, 8, N);
    const auto d = build_holder_net(named("x_one_minus_x", 2.0, 1.0), 8, 8);
    CHECK(c.net.depth() == d.net.depth());
    CHECK(count_active(c.net).active == count_active(d.net).active);
    CHECK(c.cert.sup_error_bound == doctest::Approx(d.cert.sup_error_bound));
  }

  TEST_CASE("variable subsets are wired exactly") {
    const auto doc = json::parse(R"({
      "input_dim": 3,
      "levels": [
        {"t": 1, "beta": 1.0, "K": 1.0, "components": [
          {"vars": [2], "target": {"name": "linear", "params": {"weights": [0.5]}}},
          {"vars": [1], "target": {"name": "linear", "params": {"weights": [0.5]}}}]},
        {"t": 2, "beta": 1.0, "K": 2.0, "components": [
          {"vars": [0, 1], "target": {"name": "sum", "params": {"r": 2}}}]}]})");
    const auto spec = composition_from_json(doc);
    const long long n0 = static_cast<long long>(std::ceil(holder_net_min_N(1, 1.0, 1.0)));
    const long long n1 = static_cast<long long>(std::ceil(holder_net_min_N(2, 1.0, 2.0 * 2.0)));
    const std::vector<long long> N{n0, n1};
    const auto c = build_composite_net(spec, 6, N);
    CHECK(c.net.depth() == c.cert.depth);
    CHECK(count_active(c.net).active <= c.cert.sparsity_bound);
    CHECK(c.net.max_hidden_width() <= c.cert.width_bound);
    std::mt19937_64 rng(9);
    for (int i = 0; i < 20; ++i) {
      auto x = random_point(rng, 3);
      const double a = net1(c.net, x);
      x[0] = testing::uniform(rng, 0.0, 1.0);
      CHECK(net1(c.net, x) - a == 0.0);
      CHECK(std::abs(a - evaluate_composite(spec, x)) <= c.cert.sup_error_bound);
    }
  }

  TEST_CASE("level failures name the level") {
    CompositionSpec s;
    s.input_dim = 1;
    s.levels.push_back({1, 2.0, 1.0, {{{0}, named("x_one_minus_x", 2.0, 1.0)}}});
    const std::vector<long long> N{2};
    try {
      build_composite_net(s, 8, N);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).rfind("level 0", 0) == 0);
    }
  }
}

TEST_SUITE("targets") {
  TEST_CASE("exact partials agree with finite differences") {
    const std::vector<std::pair<std::string, json>> cases{
        {"x_one_minus_x", json::object()}, {"sin_pi", json::object()}, {"product", {{"r", 2}}},
        {"sum", {{"r", 3}}}, {"linear", {{"weights", {0.3, -0.7}}, {"bias", 0.2}}}};
    std::mt19937_64 rng(10);
    for (const auto& [name, params] : cases) {
      const auto f = named(name, 2.0, 1.0, params);
      auto g = f;
      g.partial = nullptr;
      for (const auto& alpha : multi_indices_below(f.r, 2.0)) {
        const auto x = random_point(rng, f.r, 0.1, 0.9);
        CHECK(std::abs(partial_derivative(f, alpha, x) - partial_derivative(g, alpha, x)) <= 1e-6);
      }
    }
  }

  TEST_CASE("unknown names are parse errors") {
    CHECK_THROWS_AS(named("nope", 1.0, 1.0), ParseError);
  }
}
