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

#ifndef RELUNET_CALCULUS_HPP_
#define RELUNET_CALCULUS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "relunet/network.hpp"

namespace relunet {

// Zero-pads every layer to `target_widths`; same depth, input and output size.
SparseNetwork enlarge(const SparseNetwork& net, std::span<const std::size_t> target_widths);

// outer(s_v(inner(x))). Depth L_inner + L_outer + 1; the inner output layer
// becomes a hidden layer with shift v.
SparseNetwork compose(const SparseNetwork& outer, const SparseNetwork& inner,
                      std::span<const double> v);
// compose with v = 0.
SparseNetwork compose(const SparseNetwork& outer, const SparseNetwork& inner);

enum class SyncSide {
  kInput,   // q identity layers of width p_0 before the first layer; exact on x >= 0
  kOutput,  // q identity layers of width p_out after the output; exact when outputs are >= 0
};

SparseNetwork sync_depth(const SparseNetwork& net, long long extra_layers,
                         SyncSide side = SyncSide::kInput);

// Shared input, block-diagonal hidden layers, concatenated outputs.
SparseNetwork parallelize(std::span<const SparseNetwork> nets);

// Re-wires W_0 so input c reads coordinate columns[c] of a new_dim vector.
SparseNetwork embed_inputs(const SparseNetwork& net, std::span<const std::size_t> columns,
                           std::size_t new_dim);

SparseNetwork identity_net(std::size_t dim);
// Depth-zero network x -> A x.
SparseNetwork linear_net(SparseMatrix a);

}  // namespace relunet

#endif  // RELUNET_CALCULUS_HPP_
