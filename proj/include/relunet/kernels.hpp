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

#ifndef RELUNET_KERNELS_HPP_
#define RELUNET_KERNELS_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "relunet/network.hpp"

namespace relunet {

// Row-major batch of points: point i occupies [i * dim, (i + 1) * dim).
struct PointSet {
  std::size_t dim = 0;
  std::vector<double> coords;

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {coords.data() + i * dim, dim}; }
};

// Writes f(x) into out[i * coord..]. Target values are produced for every output
// coordinate at once.
using VectorTarget = std::function<void(std::span<const double> x, std::span<double> out)>;

struct SupError {
  double value = 0.0;
  std::size_t point = 0;
  std::size_t coordinate = 0;
};

inline constexpr std::size_t kSumBlock = 4096;

// OpenMP kernels. Results do not depend on the thread count: sums are formed
// over fixed blocks of kSumBlock terms and combined in block order.
std::vector<double> evaluate_batch(const SparseNetwork& net, const PointSet& points);
SupError sup_error(const SparseNetwork& net, const PointSet& points, const VectorTarget& target);
double block_sum(std::span<const double> values);
double mean_squared_residual(const SparseNetwork& net, const PointSet& points,
                             std::span<const double> responses);

namespace serial {

std::vector<double> evaluate_batch(const SparseNetwork& net, const PointSet& points);
SupError sup_error(const SparseNetwork& net, const PointSet& points, const VectorTarget& target);
double block_sum(std::span<const double> values);
double mean_squared_residual(const SparseNetwork& net, const PointSet& points,
                             std::span<const double> responses);

}  // namespace serial

// Reusable per-thread buffers for repeated single-point evaluation.
class Evaluator {
 public:
  explicit Evaluator(const SparseNetwork& net);
  // Returned span is valid until the next call.
  std::span<const double> operator()(std::span<const double> x);

 private:
  const SparseNetwork* net_;
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace relunet

#endif  // RELUNET_KERNELS_HPP_
