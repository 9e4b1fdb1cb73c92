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

#ifndef RELUNET_MULTI_INDEX_HPP_
#define RELUNET_MULTI_INDEX_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace relunet {

using MultiIndex = std::vector<int>;

int degree(std::span<const int> alpha);
double factorial(std::span<const int> alpha);
double power(std::span<const double> x, std::span<const int> alpha);

// All alpha in N^r with |alpha| < gamma, in graded order: by degree, then
// descending exponent tuple (1, x1, x2, x1^2, x1 x2, x2^2, ...).
std::vector<MultiIndex> multi_indices_below(std::size_t r, double gamma);

// Largest integer strictly below gamma (gamma > 0).
int max_degree_below(double gamma);

}  // namespace relunet

#endif  // RELUNET_MULTI_INDEX_HPP_
