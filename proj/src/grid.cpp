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

#include "relunet/grid.hpp"

#include <algorithm>
#include <array>

#include "relunet/errors.hpp"

namespace relunet {

Grid uniform_grid(std::size_t r, std::size_t points_per_axis) {
  if (r == 0 || points_per_axis < 2) throw DomainError("uniform_grid needs r >= 1 and at least two points per axis");
  std::size_t total = 1;
  for (std::size_t j = 0; j < r; ++j) total *= points_per_axis;
  Grid g;
  g.points.dim = r;
  g.points.coords.resize(total * r);
  const double h = 1.0 / static_cast<double>(points_per_axis - 1);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    for (std::size_t j = r; j-- > 0;) {
      g.points.coords[i * r + j] = static_cast<double>(rest % points_per_axis) * h;
      rest /= points_per_axis;
    }
  }
  g.spec = "uniform:" + std::to_string(points_per_axis) + "^" + std::to_string(r);
  return g;
}

Grid halton_points(std::size_t r, std::size_t n) {
  static constexpr std::array<unsigned, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (r == 0 || r > kPrimes.size()) throw DomainError("halton_points supports 1 <= r <= 16");
  Grid g;
  g.points.dim = r;
  g.points.coords.resize(n * r);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      const unsigned b = kPrimes[j];
      double f = 1.0;
      double v = 0.0;
      for (std::size_t k = i + 1; k > 0; k /= b) {
        f /= b;
        v += f * static_cast<double>(k % b);
      }
      g.points.coords[i * r + j] = v;
    }
  }
  g.spec = "halton:" + std::to_string(n) + "x" + std::to_string(r);
  return g;
}

int standard_grid_exponent(std::size_t r, int m) {
  static constexpr std::array<int, 3> kCap{14, 10, 6};
  if (r == 0 || r > 3) throw DomainError("dyadic grids are used for r <= 3 only");
  return std::min(m + 2, kCap[r - 1]);
}

Grid standard_grid(std::size_t r, int m) {
  if (r > 3) return halton_points(r, 100000);
  const int k = standard_grid_exponent(r, m);
  auto g = uniform_grid(r, (std::size_t{1} << k) + 1);
  g.spec = "dyadic:2^-" + std::to_string(k) + ",r=" + std::to_string(r);
  return g;
}

}  // namespace relunet
