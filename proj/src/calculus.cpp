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

#include "relunet/calculus.hpp"

#include <cmath>
#include <sstream>

#include "relunet/errors.hpp"

namespace relunet {

namespace {

std::vector<Layer> copy_layers(const SparseNetwork& net) {
  return {net.layers().begin(), net.layers().end()};
}

}  // namespace

SparseNetwork enlarge(const SparseNetwork& net, std::span<const std::size_t> target_widths) {
  const auto p = net.widths();
  if (target_widths.size() != p.size()) {
    throw ShapeError("enlarge: target has " + std::to_string(target_widths.size()) +
                     " widths, network has " + std::to_string(p.size()));
  }
  if (target_widths.front() != p.front() || target_widths.back() != p.back()) {
    throw ShapeError("enlarge: input and output widths must not change");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (target_widths[i] < p[i]) {
      std::ostringstream msg;
      msg << "enlarge: target width " << target_widths[i] << " at position " << i
          << " is smaller than current width " << p[i];
      throw ShapeError(msg.str());
    }
  }
  auto layers = copy_layers(net);
  for (std::size_t j = 0; j < layers.size(); ++j) {
    auto& layer = layers[j];
    const auto entries = layer.weights.entries();
    layer.weights = SparseMatrix::from_triplets(target_widths[j + 1], target_widths[j],
                                                {entries.begin(), entries.end()});
    if (j + 1 < layers.size()) layer.shift.resize(target_widths[j + 1], 0.0);
  }
  return SparseNetwork(std::move(layers), net.sup_bound());
}

SparseNetwork compose(const SparseNetwork& outer, const SparseNetwork& inner,
                      std::span<const double> v) {
  if (inner.output_dim() != outer.input_dim()) {
    throw ShapeError("compose: inner output dimension " + std::to_string(inner.output_dim()) +
                     " does not match outer input dimension " + std::to_string(outer.input_dim()));
  }
  if (v.size() != inner.output_dim()) {
    throw ShapeError("compose: shift has length " + std::to_string(v.size()) + ", expected " +
                     std::to_string(inner.output_dim()));
  }
  for (double x : v) {
    if (!std::isfinite(x) || std::abs(x) > 1.0) throw RangeError("compose: shift outside [-1, 1]");
  }
  auto layers = copy_layers(inner);
  layers.back().shift.assign(v.begin(), v.end());
  for (const auto& layer : outer.layers()) layers.push_back(layer);
  return SparseNetwork(std::move(layers), outer.sup_bound());
}

SparseNetwork compose(const SparseNetwork& outer, const SparseNetwork& inner) {
  const std::vector<double> zero(inner.output_dim(), 0.0);
  return compose(outer, inner, zero);
}

SparseNetwork sync_depth(const SparseNetwork& net, long long extra_layers, SyncSide side) {
  if (extra_layers < 0) throw DomainError("sync_depth: negative number of extra layers");
  if (extra_layers == 0) return net;
  const auto q = static_cast<std::size_t>(extra_layers);
  std::vector<Layer> layers;
  if (side == SyncSide::kInput) {
    const std::size_t d = net.input_dim();
    for (std::size_t i = 0; i < q; ++i) {
      layers.push_back(Layer{SparseMatrix::identity(d), std::vector<double>(d, 0.0)});
    }
    for (const auto& layer : net.layers()) layers.push_back(layer);
  } else {
    const std::size_t d = net.output_dim();
    layers = copy_layers(net);
    layers.back().shift.assign(d, 0.0);
    for (std::size_t i = 0; i + 1 < q; ++i) {
      layers.push_back(Layer{SparseMatrix::identity(d), std::vector<double>(d, 0.0)});
    }
    layers.push_back(Layer{SparseMatrix::identity(d), {}});
  }
  return SparseNetwork(std::move(layers), net.sup_bound());
}

SparseNetwork parallelize(std::span<const SparseNetwork> nets) {
  if (nets.empty()) throw ShapeError("parallelize: empty sequence");
  if (nets.size() == 1) return nets.front();
  const std::size_t depth = nets.front().depth();
  const std::size_t d = nets.front().input_dim();
  for (std::size_t k = 1; k < nets.size(); ++k) {
    if (nets[k].depth() != depth) {
      throw ShapeError("parallelize: member " + std::to_string(k) + " has depth " +
                       std::to_string(nets[k].depth()) + ", expected " + std::to_string(depth));
    }
    if (nets[k].input_dim() != d) {
      throw ShapeError("parallelize: member " + std::to_string(k) + " has input dimension " +
                       std::to_string(nets[k].input_dim()) + ", expected " + std::to_string(d));
    }
  }
  std::vector<Layer> layers;
  for (std::size_t j = 0; j <= depth; ++j) {
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (const auto& n : nets) {
      rows += n.layer(j).weights.rows();
      cols += n.layer(j).weights.cols();
    }
    if (j == 0) cols = d;
    std::vector<Triplet> triplets;
    std::vector<double> shift;
    std::size_t r0 = 0;
    std::size_t c0 = 0;
    for (const auto& n : nets) {
      const auto& layer = n.layer(j);
      for (const auto& t : layer.weights.entries()) {
        triplets.push_back({r0 + t.row, (j == 0 ? 0 : c0) + t.col, t.value});
      }
      shift.insert(shift.end(), layer.shift.begin(), layer.shift.end());
      r0 += layer.weights.rows();
      c0 += layer.weights.cols();
    }
    layers.push_back(Layer{SparseMatrix::from_triplets(rows, cols, std::move(triplets)), std::move(shift)});
  }
  return SparseNetwork(std::move(layers));
}

SparseNetwork embed_inputs(const SparseNetwork& net, std::span<const std::size_t> columns,
                           std::size_t new_dim) {
  if (columns.size() != net.input_dim()) {
    throw ShapeError("embed_inputs: " + std::to_string(columns.size()) + " columns for " +
                     std::to_string(net.input_dim()) + " inputs");
  }
  std::vector<bool> seen(new_dim, false);
  for (std::size_t c : columns) {
    if (c >= new_dim) throw ShapeError("embed_inputs: column " + std::to_string(c) + " out of range");
    if (seen[c]) throw ShapeError("embed_inputs: column " + std::to_string(c) + " used twice");
    seen[c] = true;
  }
  auto layers = copy_layers(net);
  std::vector<Triplet> triplets;
  for (const auto& t : layers.front().weights.entries()) triplets.push_back({t.row, columns[t.col], t.value});
  layers.front().weights = SparseMatrix::from_triplets(layers.front().weights.rows(), new_dim, std::move(triplets));
  return SparseNetwork(std::move(layers), net.sup_bound());
}

SparseNetwork identity_net(std::size_t dim) {
  return SparseNetwork({Layer{SparseMatrix::identity(dim), {}}});
}

SparseNetwork linear_net(SparseMatrix a) { return SparseNetwork({Layer{std::move(a), {}}}); }

}  // namespace relunet
