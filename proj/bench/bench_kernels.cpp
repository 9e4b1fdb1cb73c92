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

#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <vector>

#include "relunet/constructions.hpp"
#include "relunet/grid.hpp"
#include "relunet/kernels.hpp"

namespace {

using namespace relunet;

const Construction& mult_net() {
  static const auto c = build_mult(10);
  return c;
}

PointSet points(std::size_t n) { return halton_points(2, n).points; }

void BM_EvaluateSerial(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::evaluate_batch(mult_net().net, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_EvaluateParallel(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(mult_net().net, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void product_target(std::span<const double> x, std::span<double> out) { out[0] = x[0] * x[1]; }

void BM_SupErrorSerial(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(serial::sup_error(mult_net().net, pts, product_target));
}

void BM_SupErrorParallel(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sup_error(mult_net().net, pts, product_target));
}

std::vector<double> responses(std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::vector<double> y(n);
  for (auto& v : y) v = z(rng);
  return y;
}

void BM_ResidualSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = points(n);
  const auto y = responses(n);
  for (auto _ : state) benchmark::DoNotOptimize(serial::mean_squared_residual(mult_net().net, pts, y));
}

void BM_ResidualParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = points(n);
  const auto y = responses(n);
  for (auto _ : state) benchmark::DoNotOptimize(mean_squared_residual(mult_net().net, pts, y));
}

}  // namespace

BENCHMARK(BM_EvaluateSerial)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_EvaluateParallel)->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_SupErrorSerial)->Arg(1 << 16);
BENCHMARK(BM_SupErrorParallel)->Arg(1 << 16);
BENCHMARK(BM_ResidualSerial)->Arg(1 << 16);
BENCHMARK(BM_ResidualParallel)->Arg(1 << 16);

BENCHMARK_MAIN();
