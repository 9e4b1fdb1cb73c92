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

#include "relunet/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "relunet/errors.hpp"

namespace relunet {

namespace {

void check_points(const SparseNetwork& net, const PointSet& points) {
  if (points.dim != net.input_dim()) {
    throw ShapeError("point dimension " + std::to_string(points.dim) + " does not match network input " +
                     std::to_string(net.input_dim()));
  }
}

bool better(const SupError& a, const SupError& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.point != b.point) return a.point < b.point;
  return a.coordinate < b.coordinate;
}

}  // namespace

Evaluator::Evaluator(const SparseNetwork& net) : net_(&net) {
  std::size_t w = net.input_dim();
  for (const auto& layer : net.layers()) w = std::max(w, layer.weights.rows());
  a_.resize(w);
  b_.resize(w);
}

std::span<const double> Evaluator::operator()(std::span<const double> x) {
  std::copy(x.begin(), x.end(), a_.begin());
  const auto layers = net_->layers();
  std::size_t width = x.size();
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const auto& layer = layers[j];
    const std::size_t rows = layer.weights.rows();
    std::fill(b_.begin(), b_.begin() + static_cast<std::ptrdiff_t>(rows), 0.0);
    for (const auto& t : layer.weights.entries()) b_[t.row] += t.value * a_[t.col];
    if (j + 1 < layers.size()) {
      for (std::size_t i = 0; i < rows; ++i) b_[i] = std::max(b_[i] - layer.shift[i], 0.0);
    }
    a_.swap(b_);
    width = rows;
  }
  return {a_.data(), width};
}

std::vector<double> evaluate_batch(const SparseNetwork& net, const PointSet& points) {
  check_points(net, points);
  const std::size_t n = points.size();
  const std::size_t out_dim = net.output_dim();
  std::vector<double> out(n * out_dim);
#pragma omp parallel
  {
    Evaluator eval(net);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto y = eval(points.point(static_cast<std::size_t>(i)));
      std::copy(y.begin(), y.end(), out.begin() + i * static_cast<std::ptrdiff_t>(out_dim));
    }
  }
  return out;
}

SupError sup_error(const SparseNetwork& net, const PointSet& points, const VectorTarget& target) {
  check_points(net, points);
  const std::size_t n = points.size();
  const std::size_t out_dim = net.output_dim();
  SupError best;
#pragma omp parallel
  {
    Evaluator eval(net);
    std::vector<double> want(out_dim);
    SupError local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const auto x = points.point(idx);
      target(x, want);
      const auto y = eval(x);
      for (std::size_t c = 0; c < out_dim; ++c) {
        SupError cand{std::abs(y[c] - want[c]), idx, c};
        if (better(cand, local)) local = cand;
      }
    }
#pragma omp critical
    if (better(local, best)) best = local;
  }
  return best;
}

double block_sum(std::span<const double> values) {
  const std::size_t blocks = (values.size() + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
    const std::size_t hi = std::min(values.size(), lo + kSumBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double mean_squared_residual(const SparseNetwork& net, const PointSet& points,
                             std::span<const double> responses) {
  check_points(net, points);
  if (net.output_dim() != 1 || responses.size() != points.size()) {
    throw ShapeError("mean_squared_residual needs a scalar network and one response per point");
  }
  const std::size_t n = points.size();
  if (n == 0) return 0.0;
  std::vector<double> sq(n);
#pragma omp parallel
  {
    Evaluator eval(net);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double r = responses[idx] - eval(points.point(idx))[0];
      sq[idx] = r * r;
    }
  }
  return block_sum(sq) / static_cast<double>(n);
}

namespace serial {

std::vector<double> evaluate_batch(const SparseNetwork& net, const PointSet& points) {
  check_points(net, points);
  std::vector<double> out;
  out.reserve(points.size() * net.output_dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto y = evaluate(net, points.point(i));
    out.insert(out.end(), y.begin(), y.end());
  }
  return out;
}

SupError sup_error(const SparseNetwork& net, const PointSet& points, const VectorTarget& target) {
  check_points(net, points);
  SupError best;
  std::vector<double> want(net.output_dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    target(points.point(i), want);
    const auto y = evaluate(net, points.point(i));
    for (std::size_t c = 0; c < y.size(); ++c) {
      SupError cand{std::abs(y[c] - want[c]), i, c};
      if (better(cand, best)) best = cand;
    }
  }
  return best;
}

double block_sum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

double mean_squared_residual(const SparseNetwork& net, const PointSet& points,
                             std::span<const double> responses) {
  check_points(net, points);
  if (net.output_dim() != 1 || responses.size() != points.size()) {
    throw ShapeError("mean_squared_residual needs a scalar network and one response per point");
  }
  if (points.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = responses[i] - evaluate(net, points.point(i))[0];
    total += r * r;
  }
  return total / static_cast<double>(points.size());
}

}  // namespace serial

}  // namespace relunet
