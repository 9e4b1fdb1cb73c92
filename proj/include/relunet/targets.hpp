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

#ifndef RELUNET_TARGETS_HPP_
#define RELUNET_TARGETS_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "relunet/constructions.hpp"
#include "relunet/kernels.hpp"

namespace relunet {

// Named scalar targets with exact partial derivatives. A description is
// {"name": ..., "params": {...}}; unknown names or bad params raise ParseError.
//   zero, constant{value, r}, linear{weights, bias}, sum{r}, product{r},
//   x_one_minus_x, sin_pi, lipschitz_abs{r, c} (value only)
HolderTarget holder_target(const nlohmann::json& description, double beta, double K);
std::vector<std::string> holder_target_names();

// {"input_dim": d, "levels": [{"t", "beta", "K", "components": [{"vars", "target"}]}]}
CompositionSpec composition_from_json(const nlohmann::json& doc);

struct ReferenceTarget {
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
  VectorTarget fn;
};

// Reference function for a certificate target: product, monomials,
// hat_products, composite or any scalar target above.
ReferenceTarget reference_target(const nlohmann::json& description);

}  // namespace relunet

#endif  // RELUNET_TARGETS_HPP_
