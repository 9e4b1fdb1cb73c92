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

#ifndef RELUNET_TESTS_SUPPORT_HPP_
#define RELUNET_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "relunet/network.hpp"

namespace relunet::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<double> random_point(std::mt19937_64& rng, std::size_t d, double lo = 0.0,
                                        double hi = 1.0) {
  std::vector<double> x(d);
  for (auto& v : x) v = uniform(rng, lo, hi);
  return x;
}

inline SparseNetwork random_network(std::mt19937_64& rng, std::span<const std::size_t> widths,
                                    double density = 0.5) {
  std::vector<Layer> layers;
  for (std::size_t j = 0; j + 1 < widths.size(); ++j) {
    MatrixBuilder b(widths[j + 1], widths[j]);
    for (std::size_t r = 0; r < widths[j + 1]; ++r) {
      for (std::size_t c = 0; c < widths[j]; ++c) {
        if (uniform(rng, 0.0, 1.0) < density) b.add(r, c, uniform(rng, -1.0, 1.0));
      }
    }
    std::vector<double> shift;
    if (j + 2 < widths.size()) {
      for (std::size_t r = 0; r < widths[j + 1]; ++r) {
        shift.push_back(uniform(rng, 0.0, 1.0) < density ? uniform(rng, -1.0, 1.0) : 0.0);
      }
    }
    layers.push_back(Layer{std::move(b).build(), std::move(shift)});
  }
  return SparseNetwork(std::move(layers));
}

inline std::vector<std::size_t> random_widths(std::mt19937_64& rng, std::size_t max_depth,
                                              std::size_t max_width) {
  const auto depth = std::uniform_int_distribution<std::size_t>(0, max_depth)(rng);
  std::vector<std::size_t> p(depth + 2);
  for (auto& w : p) w = std::uniform_int_distribution<std::size_t>(1, max_width)(rng);
  return p;
}

// Independent dense evaluator: expands every layer into a full matrix.
inline std::vector<double> dense_evaluate(const SparseNetwork& net, std::span<const double> x) {
  std::vector<double> h(x.begin(), x.end());
  const auto layers = net.layers();
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const auto& w = layers[j].weights;
    std::vector<std::vector<double>> dense(w.rows(), std::vector<double>(w.cols(), 0.0));
    for (const auto& t : w.entries()) dense[t.row][t.col] = t.value;
    std::vector<double> y(w.rows(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
      for (std::size_t c = 0; c < w.cols(); ++c) y[r] += dense[r][c] * h[c];
      if (j + 1 < layers.size()) y[r] = y[r] - layers[j].shift[r] > 0.0 ? y[r] - layers[j].shift[r] : 0.0;
    }
    h = std::move(y);
  }
  return h;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace relunet::testing

#endif  // RELUNET_TESTS_SUPPORT_HPP_
