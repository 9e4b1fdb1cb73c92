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

#ifndef RELUNET_NETWORK_HPP_
#define RELUNET_NETWORK_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace relunet {

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Sparse matrix in coordinate form. Entries are sorted by (row, col), unique,
// non-zero and bounded by one in absolute value; every constructor enforces it.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols);

  // Strict: throws ShapeError on out-of-range or duplicate coordinates and
  // RangeError on |value| > 1, zero or non-finite values.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }
  std::span<const Triplet> entries() const { return entries_; }

  // y = A x, accumulated in (row, col) order.
  void multiply(std::span<const double> x, std::span<double> y) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Triplet> entries_;
};

// Accumulates entries for a SparseMatrix. Exact zeros are dropped, so a
// builder never produces a stored zero.
class MatrixBuilder {
 public:
  MatrixBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}
  MatrixBuilder& add(std::size_t row, std::size_t col, double value);
  SparseMatrix build();

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Triplet> triplets_;
};

// One affine map of the network. `weights` is W_j (p_{j+1} x p_j). `shift`
// holds v_{j+1} (length p_{j+1}) for hidden layers and is empty for the
// output layer, which carries no activation.
struct Layer {
  SparseMatrix weights;
  std::vector<double> shift;

  friend bool operator==(const Layer&, const Layer&) = default;
};

// f(x) = W_L s_{v_L} W_{L-1} ... s_{v_1} W_0 x  with s_v(y)_i = max(y_i - v_i, 0).
// Immutable after construction.
class SparseNetwork {
 public:
  // Validates shapes and parameter ranges; throws ShapeError / RangeError.
  SparseNetwork(std::vector<Layer> layers, std::optional<double> sup_bound = std::nullopt);

  std::size_t depth() const { return layers_.size() - 1; }
  std::size_t input_dim() const { return layers_.front().weights.cols(); }
  std::size_t output_dim() const { return layers_.back().weights.rows(); }
  // p_0, ..., p_{L+1}
  std::vector<std::size_t> widths() const;
  std::size_t max_hidden_width() const;
  std::span<const Layer> layers() const { return layers_; }
  const Layer& layer(std::size_t j) const { return layers_.at(j); }
  std::optional<double> sup_bound() const { return sup_bound_; }

  SparseNetwork with_sup_bound(std::optional<double> bound) const;

  friend bool operator==(const SparseNetwork&, const SparseNetwork&) = default;

 private:
  std::vector<Layer> layers_;
  std::optional<double> sup_bound_;
};

struct NetworkStats {
  std::size_t active = 0;    // s: non-zero weights plus non-zero shifts
  std::size_t capacity = 0;  // T: parameter count of the fully connected architecture
  std::vector<std::size_t> per_layer_active;
};

struct Evaluation {
  std::vector<double> values;
  // Set when the network has a sup bound F and |value| > F. Values are never clamped.
  std::vector<bool> exceeds_bound;
};

std::vector<double> evaluate(const SparseNetwork& net, std::span<const double> x);
Evaluation evaluate_flagged(const SparseNetwork& net, std::span<const double> x);

// Fully connected parameter count sum_l (p_l + 1) p_{l+1} - p_{L+1}.
std::size_t capacity(std::span<const std::size_t> widths);
NetworkStats count_active(const SparseNetwork& net);

// Drops hidden units whose outgoing column is zero (with their incoming row
// and shift) until none is left. A hidden layer always keeps one unit.
SparseNetwork remove_inactive(const SparseNetwork& net);

// Appends two hidden layers so the scalar output becomes min(max(y, 0), 1).
SparseNetwork clip_unit(const SparseNetwork& net);

// Scalar multiple of the output map; |factor| <= 1 keeps the parameter bound.
SparseNetwork scale_output(const SparseNetwork& net, double factor);

}  // namespace relunet

#endif  // RELUNET_NETWORK_HPP_
