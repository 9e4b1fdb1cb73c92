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

#include "doctest.h"
#include "relunet/errors.hpp"
#include "relunet/rng.hpp"
#include "relunet/wavelet.hpp"

using namespace relunet;

namespace {

IndexTuple one(int j, long long k) { return {WaveletIndex{j, k}}; }

}  // namespace

TEST_SUITE("wavelet") {
  TEST_CASE("haar spec") {
    const auto h = haar();
    CHECK_NOTHROW(validate(h));
    auto bad = h;
    bad.r = 2;
    CHECK_THROWS_AS(validate(bad), DomainError);
    CHECK(lattice_nu(1) == 1);
    CHECK(lattice_nu(2) == 2);
    CHECK(lattice_nu(3) == 3);
  }

  TEST_CASE("orthonormality") {
    const auto h = haar();
    std::vector<IndexTuple> basis{one(-1, 0), one(0, 0), one(1, 0), one(1, 1),
                                  one(2, 0), one(2, 1), one(2, 2), one(2, 3)};
    QuadOptions opts;
    opts.points_per_axis = 1024;
    for (const auto& a : basis) {
      const ScalarFn fa = [&h, a](std::span<const double> x) { return tensor_value(h, a, x); };
      for (const auto& b : basis) {
        const double g = quad_coeff(h, fa, b, opts).value;
        CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) <= 1e-6);
      }
    }
  }

  TEST_CASE("quadrature coefficients") {
    const auto h = haar();
    // Disjoint supports.
    const ScalarFn left = [](std::span<const double> x) { return x[0] < 0.5 ? x[0] : 0.0; };
    CHECK(std::abs(quad_coeff(h, left, one(1, 1)).value) <= 1e-12);
    const ScalarFn psi00 = [&h](std::span<const double> x) { return basis_value(h, {0, 0}, x[0]); };
    CHECK(std::abs(quad_coeff(h, psi00, one(0, 0)).value - 1.0) <= 1e-6);
    QuadOptions low;
    low.points_per_axis = 256;
    CHECK_THROWS_AS(quad_coeff(h, psi00, one(0, 0), low), DomainError);
    // d = 4 takes the Monte Carlo path.
    const ScalarFn sum = [](std::span<const double> x) { return x[0] + x[1] + x[2] + x[3]; };
    const IndexTuple four{{-1, 0}, {-1, 0}, {-1, 0}, {-1, 0}};
    const auto mc = quad_coeff(h, sum, four);
    CHECK(mc.method == "halton");
    CHECK(std::abs(mc.value - 2.0) <= 1e-3);
  }

  TEST_CASE("empirical coefficients") {
    const auto h = haar();
    const auto zero = sample_dataset([](std::span<const double>) { return 0.0; }, 100, 1, Design::kUniform, 1, 0.0);
    CHECK(empirical_coeff(h, zero, one(1, 0)).value == 0.0);
    CHECK(empirical_coeff(h, zero, one(1, 0)).design_flagged == false);
    const ScalarFn psi = [&h](std::span<const double> x) { return basis_value(h, {2, 1}, x[0]); };
    const auto big = sample_dataset(psi, 200000, 1, Design::kUniform, 2, 0.0);
    // ||psi_{2,1}||^2 = 1; per-sample variance of psi^2 is 4 - 1.
    CHECK(std::abs(empirical_coeff(h, big, one(2, 1)).value - 1.0) <= 4.0 * std::sqrt(3.0 / 200000.0));
    const auto pd = sample_dataset(psi, 100, 1, Design::kProductDensity, 2, 0.0);
    CHECK(empirical_coeff(h, pd, one(2, 1)).design_flagged);
  }

  TEST_CASE("unbiasedness and variance floor") {
    const auto h = haar();
    const ScalarFn f = [](std::span<const double> x) { return x[0] * x[0] + 0.5 * x[1]; };
    const IndexTuple idx{{1, 0}, {0, 0}};
    const double truth = quad_coeff(h, f, idx).value;
    const int reps = 200;
    const std::size_t n = 400;
    double s = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < reps; ++k) {
      const auto data = sample_dataset(f, n, 2, Design::kUniform, derive_seed(77, k));
      const double c = empirical_coeff(h, data, idx).value;
      s += c;
      s2 += c * c;
    }
    const double mean = s / reps;
    const double var = (s2 - reps * mean * mean) / (reps - 1);
    CHECK(std::abs(mean - truth) <= 4.0 * std::sqrt(var / reps));
    // Var >= 1/n up to the sampling error of a variance from 200 draws.
    CHECK(var >= (1.0 / n) * (1.0 - 4.0 * std::sqrt(2.0 / reps)));
  }

  TEST_CASE("estimator") {
    const auto h = haar();
    const auto data = sample_dataset([](std::span<const double> x) { return x[0]; }, 50, 1, Design::kUniform, 3);
    const auto empty = wavelet_estimate(h, data, {});
    const std::vector<double> x{0.3};
    CHECK(empty(x) == 0.0);
    const WaveletEstimate manual(h, {one(2, 1)}, {0.7});
    for (double v : {0.1, 0.26, 0.3, 0.4, 0.49}) {
      const std::vector<double> p{v};
      CHECK(std::abs(manual(p) - 0.7 * basis_value(h, {2, 1}, v)) <= 1e-12);
    }
    CHECK(level_indices(h, 1, 2).size() == 8);
    CHECK(level_indices(h, 3, 1).size() == 64);
    CHECK(balancing_level(8192, 1.0, 3) == 2);
    CHECK(balancing_level(10, 1.0, 3) == 0);
  }

  TEST_CASE("counterexample family") {
    const auto h = haar();
    for (std::size_t d : {1u, 2u}) {
      for (double alpha : {0.5, 1.0}) {
        const double K = 1.0;
        const int j = h.q + lattice_nu(d) + 3;
        const auto c = build_counterexample(j, alpha, K, d, h);
        Rng rng(5);
        const double span = std::ldexp(1.0, h.q + lattice_nu(d) - j);
        for (int i = 0; i < 10000; ++i) {
          const double u = rng.uniform() * static_cast<double>(d);
          const double v = std::clamp(u + (2.0 * rng.uniform() - 1.0) * span, 0.0, static_cast<double>(d));
          CHECK(std::abs(c.h(u)) <= K / 2.0);
          CHECK(std::abs(c.h(u) - c.h(v)) <= K * std::pow(std::abs(u - v), alpha) + 1e-15);
        }
        // Closed-form lattice coefficient at every translate.
        const double want = lattice_constant(h, d) * K * std::pow(2.0, -j * (2.0 * alpha + d) / 2.0);
        const long long count = lattice_count_per_axis(h, j, d);
        QuadOptions opts;
        opts.points_per_axis = 1024;
        for (long long p = 0; p < count; p += std::max<long long>(1, count / 3)) {
          std::vector<long long> pp(d, p);
          pp[0] = count - 1 - p;
          const double got = quad_coeff(h, c.f, lattice_index(h, j, pp), opts).value;
          CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
        }
      }
    }
    CHECK(lattice_constant(h, 1) == doctest::Approx(-1.0 / 16.0));
    CHECK(lattice_constant(h, 2) == doctest::Approx(1.0 / 512.0));
    CHECK_THROWS_AS(build_counterexample(5, 1.5, 1.0, 1, h), DomainError);
    CHECK_THROWS_AS(build_counterexample(0, 1.0, 1.0, 1, h), DomainError);
  }

  TEST_CASE("risk floor") {
    CHECK(risk_floor(std::vector<double>{0.0, 0.0}, 100.0) == 0.0);
    CHECK(risk_floor(std::vector<double>{0.5}, 100.0) == doctest::Approx(0.01));
    CHECK(risk_floor(std::vector<double>{0.05}, 100.0) == doctest::Approx(0.0025));
    const std::vector<double> coeffs{0.3, 0.01, 0.002, 0.2};
    double prev = 1e9;
    for (double n = 1; n < 1e7; n *= 3) {
      const double f = risk_floor(coeffs, n);
      CHECK(f <= prev);
      prev = f;
    }
  }
}
