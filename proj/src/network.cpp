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

#include "relunet/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "relunet/errors.hpp"

namespace relunet {

namespace {

void check_parameter(double value, const std::string& where) {
  if (!std::isfinite(value) || std::abs(value) > 1.0) {
    std::ostringstream msg;
    msg << where << ": parameter " << value << " outside [-1, 1]";
    throw RangeError(msg.str());
  }
}

}  // namespace

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  for (const auto& t : triplets) {
    if (t.row >= rows || t.col >= cols) {
      std::ostringstream msg;
      msg << "triplet (" << t.row << ", " << t.col << ") outside " << rows << "x" << cols;
      throw ShapeError(msg.str());
    }
    if (t.value == 0.0) {
      std::ostringstream msg;
      msg << "triplet (" << t.row << ", " << t.col << ") stores an exact zero";
      throw RangeError(msg.str());
    }
    check_parameter(t.value, "weight (" + std::to_string(t.row) + ", " + std::to_string(t.col) + ")");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (std::size_t i = 1; i < triplets.size(); ++i) {
    if (triplets[i].row == triplets[i - 1].row && triplets[i].col == triplets[i - 1].col) {
      std::ostringstream msg;
      msg << "duplicate triplet (" << triplets[i].row << ", " << triplets[i].col << ")";
      throw ShapeError(msg.str());
    }
  }
  m.entries_ = std::move(triplets);
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto& t : entries_) y[t.row] += t.value * x[t.col];
}

MatrixBuilder& MatrixBuilder::add(std::size_t row, std::size_t col, double value) {
  if (value != 0.0) triplets_.push_back({row, col, value});
  return *this;
}

SparseMatrix MatrixBuilder::build() {
  return SparseMatrix::from_triplets(rows_, cols_, std::move(triplets_));
}

SparseNetwork::SparseNetwork(std::vector<Layer> layers, std::optional<double> sup_bound)
    : layers_(std::move(layers)), sup_bound_(sup_bound) {
  if (layers_.empty()) throw ShapeError("network needs at least one layer");
  if (sup_bound_ && !(*sup_bound_ > 0.0)) throw RangeError("sup_bound must be positive");
  for (std::size_t j = 0; j < layers_.size(); ++j) {
    const auto& layer = layers_[j];
    const auto where = "layers[" + std::to_string(j) + "]";
    if (layer.weights.rows() == 0 || layer.weights.cols() == 0) {
      throw ShapeError(where + ": widths must be positive");
    }
    if (j > 0 && layer.weights.cols() != layers_[j - 1].weights.rows()) {
      std::ostringstream msg;
      msg << where << ": expects " << layer.weights.cols() << " inputs but previous layer has "
          << layers_[j - 1].weights.rows() << " units";
      throw ShapeError(msg.str());
    }
    const bool output = j + 1 == layers_.size();
    const std::size_t want = output ? 0 : layer.weights.rows();
    if (layer.shift.size() != want) {
      std::ostringstream msg;
      msg << where << ".shift: length " << layer.shift.size() << ", expected " << want;
      throw ShapeError(msg.str());
    }
    for (std::size_t i = 0; i < layer.shift.size(); ++i) {
      check_parameter(layer.shift[i], where + ".shift[" + std::to_string(i) + "]");
    }
  }
}

std::vector<std::size_t> SparseNetwork::widths() const {
  std::vector<std::size_t> p;
  p.reserve(layers_.size() + 1);
  p.push_back(input_dim());
  for (const auto& layer : layers_) p.push_back(layer.weights.rows());
  return p;
}

std::size_t SparseNetwork::max_hidden_width() const {
  std::size_t w = 0;
  for (std::size_t j = 0; j + 1 < layers_.size(); ++j) w = std::max(w, layers_[j].weights.rows());
  return w;
}

SparseNetwork SparseNetwork::with_sup_bound(std::optional<double> bound) const {
  return SparseNetwork(layers_, bound);
}

std::vector<double> evaluate(const SparseNetwork& net, std::span<const double> x) {
  if (x.size() != net.input_dim()) {
    std::ostringstream msg;
    msg << "input has length " << x.size() << ", network expects " << net.input_dim();
    throw ShapeError(msg.str());
  }
  std::vector<double> h(x.begin(), x.end());
  std::vector<double> y;
  const auto layers = net.layers();
  for (std::size_t j = 0; j < layers.size(); ++j) {
    y.assign(layers[j].weights.rows(), 0.0);
    layers[j].weights.multiply(h, y);
    if (j + 1 < layers.size()) {
      const auto& v = layers[j].shift;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = std::max(y[i] - v[i], 0.0);
    }
    h.swap(y);
  }
  return h;
}

Evaluation evaluate_flagged(const SparseNetwork& net, std::span<const double> x) {
  Evaluation out;
  out.values = evaluate(net, x);
  out.exceeds_bound.assign(out.values.size(), false);
  if (const auto bound = net.sup_bound()) {
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.exceeds_bound[i] = std::abs(out.values[i]) > *bound;
    }
  }
  return out;
}

std::size_t capacity(std::span<const std::size_t> widths) {
  if (widths.size() < 2) throw ShapeError("width vector needs at least two entries");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) total += (widths[l] + 1) * widths[l + 1];
  return total - widths.back();
}

NetworkStats count_active(const SparseNetwork& net) {
  NetworkStats stats;
  const auto p = net.widths();
  stats.capacity = capacity(p);
  for (const auto& layer : net.layers()) {
    std::size_t active = layer.weights.nnz();
    active += static_cast<std::size_t>(
        std::count_if(layer.shift.begin(), layer.shift.end(), [](double v) { return v != 0.0; }));
    stats.per_layer_active.push_back(active);
    stats.active += active;
  }
  return stats;
}

SparseNetwork remove_inactive(const SparseNetwork& net) {
  std::vector<Layer> layers(net.layers().begin(), net.layers().end());
  bool changed = true;
  while (changed) {
    changed = false;
    // Hidden layer i (1..L) consists of the rows of layers[i-1]; its outgoing
    // weights are the columns of layers[i].
    for (std::size_t i = 1; i < layers.size(); ++i) {
      const std::size_t units = layers[i - 1].weights.rows();
      std::vector<bool> used(units, false);
      for (const auto& t : layers[i].weights.entries()) used[t.col] = true;
      std::size_t kept = static_cast<std::size_t>(std::count(used.begin(), used.end(), true));
      if (kept == units) continue;
      if (kept == 0) {
        if (units == 1) continue;
        used[0] = true;
        kept = 1;
      }
      std::vector<std::size_t> remap(units, units);
      std::size_t next = 0;
      for (std::size_t u = 0; u < units; ++u) {
        if (used[u]) remap[u] = next++;
      }
      MatrixBuilder incoming(kept, layers[i - 1].weights.cols());
      for (const auto& t : layers[i - 1].weights.entries()) {
        if (used[t.row]) incoming.add(remap[t.row], t.col, t.value);
      }
      std::vector<double> shift;
      shift.reserve(kept);
      for (std::size_t u = 0; u < units; ++u) {
        if (used[u]) shift.push_back(layers[i - 1].shift[u]);
      }
      MatrixBuilder outgoing(layers[i].weights.rows(), kept);
      for (const auto& t : layers[i].weights.entries()) outgoing.add(t.row, remap[t.col], t.value);
      layers[i - 1].weights = std::move(incoming).build();
      layers[i - 1].shift = std::move(shift);
      layers[i].weights = std::move(outgoing).build();
      changed = true;
    }
  }
  return SparseNetwork(std::move(layers), net.sup_bound());
}

SparseNetwork clip_unit(const SparseNetwork& net) {
  if (net.output_dim() != 1) throw UnsupportedError("clip_unit needs a scalar-output network");
  std::vector<Layer> layers(net.layers().begin(), net.layers().end());
  // a = s(1 - y): negate the output row and shift by -1.
  MatrixBuilder negated(1, layers.back().weights.cols());
  for (const auto& t : layers.back().weights.entries()) negated.add(t.row, t.col, -t.value);
  layers.back().weights = std::move(negated).build();
  layers.back().shift = {-1.0};
  // b = s(1 - a), output b.
  layers.push_back(Layer{MatrixBuilder(1, 1).add(0, 0, -1.0).build(), {-1.0}});
  layers.push_back(Layer{SparseMatrix::identity(1), {}});
  return SparseNetwork(std::move(layers), net.sup_bound());
}

SparseNetwork scale_output(const SparseNetwork& net, double factor) {
  std::vector<Layer> layers(net.layers().begin(), net.layers().end());
  MatrixBuilder scaled(layers.back().weights.rows(), layers.back().weights.cols());
  for (const auto& t : layers.back().weights.entries()) scaled.add(t.row, t.col, factor * t.value);
  layers.back().weights = std::move(scaled).build();
  return SparseNetwork(std::move(layers), net.sup_bound());
}

}  // namespace relunet
