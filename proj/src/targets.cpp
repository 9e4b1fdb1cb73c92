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

#include "relunet/targets.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include "relunet/errors.hpp"
#include "relunet/multi_index.hpp"

namespace relunet {

namespace {

using nlohmann::json;

json params_of(const json& d) {
  if (!d.is_object() || !d.contains("name") || !d["name"].is_string()) {
    throw ParseError("target: expected {\"name\": ..., \"params\": {...}}");
  }
  return d.value("params", json::object());
}

template <typename T>
T param(const json& p, const char* key, T fallback) {
  if (!p.contains(key)) return fallback;
  try {
    return p.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("target.params.") + key + ": wrong type");
  }
}

std::size_t positive_dim(const json& p, std::size_t fallback) {
  const auto r = param<long long>(p, "r", static_cast<long long>(fallback));
  if (r < 1) throw ParseError("target.params.r: must be positive");
  return static_cast<std::size_t>(r);
}

}  // namespace

std::vector<std::string> holder_target_names() {
  return {"zero", "constant", "linear", "sum", "product", "x_one_minus_x", "sin_pi", "lipschitz_abs"};
}

HolderTarget holder_target(const json& description, double beta, double K) {
  const auto p = params_of(description);
  const auto name = description["name"].get<std::string>();
  HolderTarget f;
  f.beta = beta;
  f.K = K;
  f.description = {{"name", name}, {"params", p}};
  if (name == "zero" || name == "constant") {
    const double c = name == "zero" ? 0.0 : param<double>(p, "value", 0.0);
    f.r = positive_dim(p, 1);
    f.value = [c](std::span<const double>) { return c; };
    f.partial = [c](std::span<const int> a, std::span<const double>) { return degree(a) == 0 ? c : 0.0; };
  } else if (name == "linear") {
    const auto w = param<std::vector<double>>(p, "weights", {1.0});
    const double b = param<double>(p, "bias", 0.0);
    if (w.empty()) throw ParseError("target.params.weights: must be non-empty");
    f.r = w.size();
    f.value = [w, b](std::span<const double> x) {
      double s = b;
      for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
      return s;
    };
    f.partial = [w, b, f_value = f.value](std::span<const int> a, std::span<const double> x) {
      const int d = degree(a);
      if (d == 0) return f_value(x);
      if (d > 1) return 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 1) return w[i];
      }
      return 0.0;
    };
  } else if (name == "sum") {
    f.r = positive_dim(p, 2);
    f.value = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return s;
    };
    f.partial = [v = f.value](std::span<const int> a, std::span<const double> x) {
      const int d = degree(a);
      return d == 0 ? v(x) : d == 1 ? 1.0 : 0.0;
    };
  } else if (name == "product") {
    f.r = positive_dim(p, 2);
    f.value = [](std::span<const double> x) {
      double s = 1.0;
      for (double v : x) s *= v;
      return s;
    };
    f.partial = [](std::span<const int> a, std::span<const double> x) {
      double s = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (a[i] > 1) return 0.0;
        if (a[i] == 0) s *= x[i];
      }
      return s;
    };
  } else if (name == "x_one_minus_x") {
    f.r = 1;
    f.value = [](std::span<const double> x) { return x[0] * (1.0 - x[0]); };
    f.partial = [](std::span<const int> a, std::span<const double> x) {
      switch (a[0]) {
        case 0:
          return x[0] * (1.0 - x[0]);
        case 1:
          return 1.0 - 2.0 * x[0];
        case 2:
          return -2.0;
        default:
          return 0.0;
      }
    };
  } else if (name == "sin_pi") {
    f.r = 1;
    f.value = [](std::span<const double> x) { return std::sin(std::numbers::pi * x[0]); };
    f.partial = [](std::span<const int> a, std::span<const double> x) {
      const double pi = std::numbers::pi;
      return std::pow(pi, a[0]) * std::sin(pi * x[0] + a[0] * pi / 2.0);
    };
  } else if (name == "lipschitz_abs") {
    f.r = positive_dim(p, 1);
    const double c = param<double>(p, "c", 0.5);
    f.value = [c](std::span<const double> x) {
      double s = -c;
      for (double v : x) s += v;
      return std::abs(s);
    };
    f.partial = [v = f.value](std::span<const int> a, std::span<const double> x) {
      if (degree(a) != 0) throw DomainError("lipschitz_abs has no derivatives; use beta <= 1");
      return v(x);
    };
  } else {
    throw ParseError("target.name: unknown target '" + name + "'");
  }
  return f;
}

CompositionSpec composition_from_json(const json& doc) {
  CompositionSpec spec;
  try {
    spec.input_dim = doc.at("input_dim").get<std::size_t>();
    const auto& levels = doc.at("levels");
    if (!levels.is_array()) throw ParseError("composition.levels: expected an array");
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& l = levels[i];
      CompositionLevel level;
      level.t = l.at("t").get<std::size_t>();
      level.beta = l.at("beta").get<double>();
      level.K = l.at("K").get<double>();
      for (const auto& c : l.at("components")) {
        Component comp;
        comp.vars = c.at("vars").get<std::vector<std::size_t>>();
        comp.g = holder_target(c.at("target"), level.beta, level.K);
        level.components.push_back(std::move(comp));
      }
      spec.levels.push_back(std::move(level));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("composition: ") + e.what());
  }
  spec.description = doc;
  validate(spec);
  return spec;
}

ReferenceTarget reference_target(const json& description) {
  const auto p = params_of(description);
  const auto name = description["name"].get<std::string>();
  ReferenceTarget t;
  if (name == "monomials") {
    t.input_dim = positive_dim(p, 1);
    const double gamma = param<double>(p, "gamma", 1.0);
    const auto indices = multi_indices_below(t.input_dim, gamma);
    t.output_dim = indices.size();
    t.fn = [indices](std::span<const double> x, std::span<double> out) {
      for (std::size_t k = 0; k < indices.size(); ++k) out[k] = power(x, indices[k]);
    };
  } else if (name == "hat_products") {
    t.input_dim = positive_dim(p, 1);
    const int M = param<int>(p, "M", 1);
    if (M < 1) throw ParseError("target.params.M: must be positive");
    const auto side = static_cast<std::size_t>(M) + 1;
    t.output_dim = 1;
    for (std::size_t j = 0; j < t.input_dim; ++j) t.output_dim *= side;
    const auto r = t.input_dim;
    const std::size_t count = t.output_dim;
    t.fn = [r, M, side, count](std::span<const double> x, std::span<double> out) {
      std::vector<int> l(r, 0);
      for (std::size_t g = 0; g < count; ++g) {
        double w = 1.0;
        for (std::size_t j = 0; j < r; ++j) {
          const double v = 1.0 / M - std::abs(x[j] - static_cast<double>(l[j]) / M);
          w *= v > 0.0 ? v : 0.0;
        }
        out[g] = w;
        for (std::size_t j = r; j-- > 0;) {
          if (++l[j] < static_cast<int>(side)) break;
          l[j] = 0;
        }
      }
    };
  } else if (name == "composite") {
    auto spec = std::make_shared<CompositionSpec>(composition_from_json(p));
    t.input_dim = spec->input_dim;
    t.output_dim = 1;
    t.fn = [spec](std::span<const double> x, std::span<double> out) { out[0] = evaluate_composite(*spec, x); };
  } else {
    auto f = holder_target(description, 1.0, 1.0);
    t.input_dim = f.r;
    t.output_dim = 1;
    t.fn = [value = f.value](std::span<const double> x, std::span<double> out) { out[0] = value(x); };
  }
  return t;
}

}  // namespace relunet
