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

#include "relunet/multi_index.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "relunet/errors.hpp"

namespace relunet {

int degree(std::span<const int> alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

double factorial(std::span<const int> alpha) {
  double f = 1.0;
  for (int a : alpha) {
    for (int k = 2; k <= a; ++k) f *= k;
  }
  return f;
}

double power(std::span<const double> x, std::span<const int> alpha) {
  double p = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int k = 0; k < alpha[i]; ++k) p *= x[i];
  }
  return p;
}

int max_degree_below(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("smoothness must be positive");
  return static_cast<int>(std::ceil(gamma)) - 1;
}

std::vector<MultiIndex> multi_indices_below(std::size_t r, double gamma) {
  if (r == 0) throw DomainError("dimension must be positive");
  const int top = max_degree_below(gamma);
  std::vector<MultiIndex> out;
  MultiIndex alpha(r, 0);
  // Descending tuples of a fixed degree: the first coordinate takes the most.
  std::function<void(std::size_t, int)> fill = [&](std::size_t i, int left) {
    if (i + 1 == r) {
      alpha[i] = left;
      out.push_back(alpha);
      return;
    }
    for (int a = left; a >= 0; --a) {
      alpha[i] = a;
      fill(i + 1, left - a);
    }
  };
  for (int deg = 0; deg <= top; ++deg) fill(0, deg);
  return out;
}

}  // namespace relunet
