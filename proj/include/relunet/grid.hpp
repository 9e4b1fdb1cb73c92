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

#ifndef RELUNET_GRID_HPP_
#define RELUNET_GRID_HPP_

#include <cstddef>
#include <string>

#include "relunet/kernels.hpp"

namespace relunet {

struct Grid {
  PointSet points;
  std::string spec;
};

// Tensor grid {0, 1/(n-1), ..., 1}^r.
Grid uniform_grid(std::size_t r, std::size_t points_per_axis);
// First n Halton points in [0,1)^r (bases 2, 3, 5, ...).
Grid halton_points(std::size_t r, std::size_t n);

// Per-axis exponent of the standard dyadic grid for resolution parameter m.
int standard_grid_exponent(std::size_t r, int m);
// r <= 3: step 2^-k with k = standard_grid_exponent(r, m); r > 3: 10^5 Halton points.
Grid standard_grid(std::size_t r, int m);

}  // namespace relunet

#endif  // RELUNET_GRID_HPP_
