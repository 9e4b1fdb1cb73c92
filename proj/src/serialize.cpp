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

#include "relunet/serialize.hpp"

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "relunet/errors.hpp"

namespace relunet {

namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + "." + key + ": missing");
  return *it;
}

std::size_t as_size(const json& v, const std::string& where) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ParseError(where + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where + ": expected a number");
  return v.get<double>();
}

void check_range(double v, const std::string& where) {
  if (!std::isfinite(v) || std::abs(v) > 1.0) {
    std::ostringstream msg;
    msg << where << ": value " << v << " outside [-1, 1]";
    throw RangeError(msg.str());
  }
}

}  // namespace

json network_to_json(const SparseNetwork& net) {
  json doc;
  doc["version"] = kNetworkSchemaVersion;
  doc["depth"] = net.depth();
  doc["widths"] = net.widths();
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    json l;
    l["rows"] = layer.weights.rows();
    l["cols"] = layer.weights.cols();
    json triplets = json::array();
    for (const auto& t : layer.weights.entries()) triplets.push_back(json::array({t.row, t.col, t.value}));
    l["triplets"] = std::move(triplets);
    l["shift"] = layer.shift;
    layers.push_back(std::move(l));
  }
  doc["layers"] = std::move(layers);
  if (net.sup_bound()) doc["sup_bound"] = *net.sup_bound();
  return doc;
}

SparseNetwork network_from_json(const json& doc) {
  const std::string root = "network";
  const auto version = as_size(field(doc, "version", root), "version");
  if (version != kNetworkSchemaVersion) {
    throw ParseError("version: unsupported schema version " + std::to_string(version));
  }
  const auto depth = as_size(field(doc, "depth", root), "depth");
  const auto& widths_doc = field(doc, "widths", root);
  if (!widths_doc.is_array()) throw ParseError("widths: expected an array");
  std::vector<std::size_t> widths;
  for (std::size_t i = 0; i < widths_doc.size(); ++i) {
    widths.push_back(as_size(widths_doc[i], "widths[" + std::to_string(i) + "]"));
  }
  if (widths.size() != depth + 2) {
    throw ShapeError("widths: length " + std::to_string(widths.size()) + " does not match depth " +
                     std::to_string(depth));
  }
  const auto& layers_doc = field(doc, "layers", root);
  if (!layers_doc.is_array()) throw ParseError("layers: expected an array");
  if (layers_doc.size() != depth + 1) {
    throw ShapeError("layers: " + std::to_string(layers_doc.size()) + " entries, expected " +
                     std::to_string(depth + 1));
  }
  std::vector<Layer> layers;
  for (std::size_t j = 0; j < layers_doc.size(); ++j) {
    const std::string where = "layers[" + std::to_string(j) + "]";
    const auto& l = layers_doc[j];
    const auto rows = as_size(field(l, "rows", where), where + ".rows");
    const auto cols = as_size(field(l, "cols", where), where + ".cols");
    if (rows != widths[j + 1] || cols != widths[j]) {
      std::ostringstream msg;
      msg << where << ": shape " << rows << "x" << cols << " does not match widths ("
          << widths[j + 1] << "x" << widths[j] << ")";
      throw ShapeError(msg.str());
    }
    const auto& tdoc = field(l, "triplets", where);
    if (!tdoc.is_array()) throw ParseError(where + ".triplets: expected an array");
    std::vector<Triplet> triplets;
    for (std::size_t k = 0; k < tdoc.size(); ++k) {
      const std::string tw = where + ".triplets[" + std::to_string(k) + "]";
      if (!tdoc[k].is_array() || tdoc[k].size() != 3) throw ParseError(tw + ": expected [row, col, value]");
      Triplet t{as_size(tdoc[k][0], tw + "[0]"), as_size(tdoc[k][1], tw + "[1]"),
                as_double(tdoc[k][2], tw + "[2]")};
      check_range(t.value, tw);
      triplets.push_back(t);
    }
    const auto& sdoc = field(l, "shift", where);
    if (!sdoc.is_array()) throw ParseError(where + ".shift: expected an array");
    std::vector<double> shift;
    for (std::size_t k = 0; k < sdoc.size(); ++k) {
      const std::string sw = where + ".shift[" + std::to_string(k) + "]";
      shift.push_back(as_double(sdoc[k], sw));
      check_range(shift.back(), sw);
    }
    SparseMatrix weights;
    try {
      weights = SparseMatrix::from_triplets(rows, cols, std::move(triplets));
    } catch (const ShapeError& e) {
      throw ShapeError(where + ".triplets: " + e.what());
    } catch (const RangeError& e) {
      throw RangeError(where + ".triplets: " + e.what());
    }
    layers.push_back(Layer{std::move(weights), std::move(shift)});
  }
  std::optional<double> sup_bound;
  if (auto it = doc.find("sup_bound"); it != doc.end()) sup_bound = as_double(*it, "sup_bound");
  return SparseNetwork(std::move(layers), sup_bound);
}

std::string serialize(const SparseNetwork& net) { return network_to_json(net).dump(1) + "\n"; }

SparseNetwork deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("network document: ") + e.what());
  }
  return network_from_json(doc);
}

}  // namespace relunet
