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

#include "relunet/certificate.hpp"

#include <cmath>
#include <limits>

#include "relunet/errors.hpp"

namespace relunet {

using nlohmann::json;

std::string to_string(DerivativeProvenance p) {
  switch (p) {
    case DerivativeProvenance::kNotNeeded:
      return "not_needed";
    case DerivativeProvenance::kExact:
      return "exact";
    case DerivativeProvenance::kFiniteDifference:
      return "finite_difference";
  }
  return "unknown";
}

DerivativeProvenance provenance_from_string(const std::string& s) {
  if (s == "not_needed") return DerivativeProvenance::kNotNeeded;
  if (s == "exact") return DerivativeProvenance::kExact;
  if (s == "finite_difference") return DerivativeProvenance::kFiniteDifference;
  throw ParseError("derivative_provenance: unknown value '" + s + "'");
}

std::uint64_t ceil_to_u64(double v) {
  if (!(v >= 0.0)) return 0;
  if (v >= 1.8e19) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ceil(v));
}

json certificate_to_json(const Certificate& cert) {
  json doc;
  doc["version"] = kCertificateSchemaVersion;
  doc["statement_id"] = cert.statement_id;
  doc["depth"] = cert.depth;
  doc["width_bound"] = cert.width_bound;
  doc["sparsity_bound"] = cert.sparsity_bound;
  doc["sup_error_bound"] = cert.sup_error_bound;
  json domain = json::array();
  for (const auto& [lo, hi] : cert.domain) domain.push_back(json::array({lo, hi}));
  doc["domain"] = std::move(domain);
  doc["target"] = cert.target;
  doc["derivative_provenance"] = to_string(cert.derivative_provenance);
  doc["measured_grid_error"] = cert.measured_grid_error ? json(*cert.measured_grid_error) : json(nullptr);
  doc["grid_spec"] = cert.grid_spec;
  doc["details"] = cert.details;
  return doc;
}

Certificate certificate_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("certificate: expected an object");
  auto need = [&](const char* key) -> const json& {
    auto it = doc.find(key);
    if (it == doc.end()) throw ParseError(std::string("certificate.") + key + ": missing");
    return *it;
  };
  Certificate cert;
  try {
    if (need("version").get<int>() != kCertificateSchemaVersion) {
      throw ParseError("certificate.version: unsupported schema version");
    }
    cert.statement_id = need("statement_id").get<std::string>();
    cert.depth = need("depth").get<std::size_t>();
    cert.width_bound = need("width_bound").get<std::uint64_t>();
    cert.sparsity_bound = need("sparsity_bound").get<std::uint64_t>();
    cert.sup_error_bound = need("sup_error_bound").get<double>();
    for (const auto& d : need("domain")) cert.domain.emplace_back(d.at(0).get<double>(), d.at(1).get<double>());
    cert.target = need("target");
    cert.derivative_provenance = provenance_from_string(need("derivative_provenance").get<std::string>());
    if (const auto& m = need("measured_grid_error"); !m.is_null()) cert.measured_grid_error = m.get<double>();
    cert.grid_spec = need("grid_spec").get<std::string>();
    if (auto it = doc.find("details"); it != doc.end()) cert.details = *it;
  } catch (const json::exception& e) {
    throw ParseError(std::string("certificate: ") + e.what());
  }
  return cert;
}

std::vector<ClaimCheck> check_structure(const SparseNetwork& net, const Certificate& cert) {
  std::vector<ClaimCheck> out;
  out.push_back({"depth", std::to_string(cert.depth), std::to_string(net.depth()),
                 net.depth() == cert.depth});
  const auto width = net.max_hidden_width();
  out.push_back({"width_bound", std::to_string(cert.width_bound), std::to_string(width),
                 width <= cert.width_bound});
  const auto s = count_active(net).active;
  out.push_back({"sparsity_bound", std::to_string(cert.sparsity_bound), std::to_string(s),
                 s <= cert.sparsity_bound});
  return out;
}

}  // namespace relunet
