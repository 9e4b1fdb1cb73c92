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

#ifndef RELUNET_SERIALIZE_HPP_
#define RELUNET_SERIALIZE_HPP_

#include <string>
#include <string_view>

#include "json.hpp"
#include "relunet/network.hpp"

namespace relunet {

inline constexpr int kNetworkSchemaVersion = 1;

nlohmann::json network_to_json(const SparseNetwork& net);
// Throws ParseError for malformed documents, RangeError for parameters outside
// [-1, 1] and ShapeError for inconsistent shapes. Messages name the field.
SparseNetwork network_from_json(const nlohmann::json& doc);

// Canonical text form: sorted keys, shortest round-trip doubles.
std::string serialize(const SparseNetwork& net);
SparseNetwork deserialize(std::string_view text);

}  // namespace relunet

#endif  // RELUNET_SERIALIZE_HPP_
