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

#ifndef RELUNET_CERTIFICATE_HPP_
#define RELUNET_CERTIFICATE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "relunet/network.hpp"

namespace relunet {

inline constexpr int kCertificateSchemaVersion = 1;

enum class DerivativeProvenance { kNotNeeded, kExact, kFiniteDifference };

std::string to_string(DerivativeProvenance p);
DerivativeProvenance provenance_from_string(const std::string& s);

// Claims a construction makes about its network. The target description is
// enough to rebuild the reference function through the target registry.
struct Certificate {
  std::string statement_id;
  std::size_t depth = 0;
  std::uint64_t width_bound = 0;
  std::uint64_t sparsity_bound = 0;
  double sup_error_bound = 0.0;
  std::vector<std::pair<double, double>> domain;
  nlohmann::json target = nlohmann::json::object();
  DerivativeProvenance derivative_provenance = DerivativeProvenance::kNotNeeded;
  std::optional<double> measured_grid_error;
  std::string grid_spec;
  // Free-form construction details (output layout, internal parameters).
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& doc);

// Saturating conversion of a non-negative real bound to an integer claim.
std::uint64_t ceil_to_u64(double v);

struct ClaimCheck {
  std::string claim;
  std::string claimed;
  std::string measured;
  bool holds = false;
};

// Structural claims only: exact depth, max hidden width and active count.
std::vector<ClaimCheck> check_structure(const SparseNetwork& net, const Certificate& cert);

}  // namespace relunet

#endif  // RELUNET_CERTIFICATE_HPP_
