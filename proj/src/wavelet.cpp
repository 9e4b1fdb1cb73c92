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

#include "relunet/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relunet/errors.hpp"
#include "relunet/grid.hpp"

namespace relunet {

namespace {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return !(hi > lo); }
};

Interval support(const WaveletSpec& spec, WaveletIndex idx) {
  const double width = std::ldexp(1.0, spec.q);
  Interval s;
  if (idx.j < 0) {
    s = {static_cast<double>(idx.k), static_cast<double>(idx.k) + width};
  } else {
    s = {std::ldexp(static_cast<double>(idx.k), -idx.j), std::ldexp(static_cast<double>(idx.k) + width, -idx.j)};
  }
  return {std::max(s.lo, 0.0), std::min(s.hi, 1.0)};
}

// Midpoint rule for int_0^{2^q} g with n cells.
double integrate_support(const WaveletSpec& spec, const std::function<double(double)>& g, std::size_t n) {
  const double width = std::ldexp(1.0, spec.q);
  const double h = width / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += g((static_cast<double>(i) + 0.5) * h);
  return s * h;
}

double bump(double u, int e) { return u <= 0.5 ? std::pow(u, e) / e : std::pow(1.0 - u, e) / e; }

}  // namespace

WaveletSpec haar() {
  WaveletSpec s;
  s.name = "haar";
  s.mother = [](double x) { return x >= 0.0 && x < 0.5 ? 1.0 : (x >= 0.5 && x < 1.0 ? -1.0 : 0.0); };
  s.scaling = [](double x) { return x >= 0.0 && x < 1.0 ? 1.0 : 0.0; };
  s.q = 0;
  s.r = 1;
  s.mu0 = 0.0;
  s.mu_r = -0.25;
  return s;
}

void validate(const WaveletSpec& spec) {
  if (!spec.mother || !spec.scaling) throw DomainError("wavelet: mother and scaling functions are required");
  const double width = std::ldexp(1.0, spec.q);
  for (int i = 1; i <= 1000; ++i) {
    const double off = width * i / 1000.0;
    if (spec.mother(-off) != 0.0 || spec.mother(width + off) != 0.0) {
      throw DomainError("wavelet: mother function does not vanish outside [0, 2^q]");
    }
  }
  const std::size_t n = 1u << 16;
  const double tol = 1e-6;
  const double mu0 = integrate_support(spec, spec.mother, n);
  if (std::abs(mu0 - spec.mu0) > tol) throw DomainError("wavelet: mu_0 disagrees with quadrature");
  int r = 1;
  double mu = 0.0;
  for (; r <= 16; ++r) {
    mu = integrate_support(spec, [&](double x) { return std::pow(x, r) * spec.mother(x); }, n);
    if (std::abs(mu) > tol) break;
  }
  if (r != spec.r) {
    std::ostringstream msg;
    msg << "wavelet: first nonvanishing moment is r = " << r << ", spec says " << spec.r;
    throw DomainError(msg.str());
  }
  if (std::abs(mu - spec.mu_r) > tol) throw DomainError("wavelet: mu_r disagrees with quadrature");
}

int lattice_nu(std::size_t d) { return ceil_log2(static_cast<double>(d)) + 1; }

double basis_value(const WaveletSpec& spec, WaveletIndex idx, double x) {
  if (idx.j < 0) return spec.scaling(x - static_cast<double>(idx.k));
  return std::sqrt(std::ldexp(1.0, idx.j)) *
         spec.mother(std::ldexp(x, idx.j) - static_cast<double>(idx.k));
}

double tensor_value(const WaveletSpec& spec, const IndexTuple& idx, std::span<const double> x) {
  double v = 1.0;
  for (std::size_t r = 0; r < idx.size() && v != 0.0; ++r) v *= basis_value(spec, idx[r], x[r]);
  return v;
}

EmpiricalCoefficient empirical_coeff(const WaveletSpec& spec, const RegressionDataset& data,
                                     const IndexTuple& idx) {
  if (idx.size() != data.d()) throw ShapeError("empirical_coeff: index tuple length differs from d");
  double s = 0.0;
  for (std::size_t i = 0; i < data.n(); ++i) s += data.Y[i] * tensor_value(spec, idx, data.X.point(i));
  return {s / static_cast<double>(data.n()), data.design != Design::kUniform};
}

QuadResult quad_coeff(const WaveletSpec& spec, const ScalarFn& f, const IndexTuple& idx,
                      const QuadOptions& opts) {
  const std::size_t d = idx.size();
  if (d == 0) throw ShapeError("quad_coeff: empty index tuple");
  std::vector<Interval> box;
  double volume = 1.0;
  for (const auto& l : idx) {
    box.push_back(support(spec, l));
    if (box.back().empty()) return {0.0, 0.0, "empty support"};
    volume *= box.back().hi - box.back().lo;
  }
  if (d >= 4) {
    const auto pts = halton_points(d, opts.mc_points).points;
    std::vector<double> x(d);
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto u = pts.point(i);
      for (std::size_t r = 0; r < d; ++r) x[r] = box[r].lo + u[r] * (box[r].hi - box[r].lo);
      const double v = f(x) * tensor_value(spec, idx, x) * volume;
      s += v;
      s2 += v * v;
    }
    const double m = static_cast<double>(pts.size());
    const double mean = s / m;
    return {mean, std::sqrt(std::max(s2 / m - mean * mean, 0.0) / m), "halton"};
  }
  std::size_t n = opts.points_per_axis;
  if (n == 0) n = d <= 2 ? 4096 : 256;
  if (d <= 2 && n < 1024) throw DomainError("quad_coeff: at least 2^10 points per axis for d <= 2");
  // Per-axis nodes and basis values.
  std::vector<std::vector<double>> node(d, std::vector<double>(n));
  std::vector<std::vector<double>> weight(d, std::vector<double>(n));
  for (std::size_t r = 0; r < d; ++r) {
    const double h = (box[r].hi - box[r].lo) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      node[r][i] = box[r].lo + (static_cast<double>(i) + 0.5) * h;
      weight[r][i] = h * basis_value(spec, idx[r], node[r][i]);
    }
  }
  std::vector<double> row_sum(n, 0.0);
  const long long rows = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i0 = 0; i0 < rows; ++i0) {
    const std::size_t a = static_cast<std::size_t>(i0);
    std::vector<double> x(d);
    x[0] = node[0][a];
    double s = 0.0;
    if (weight[0][a] != 0.0) {
      if (d == 1) {
        s = f(x) * weight[0][a];
      } else if (d == 2) {
        for (std::size_t b = 0; b < n; ++b) {
          if (weight[1][b] == 0.0) continue;
          x[1] = node[1][b];
          s += f(x) * weight[1][b];
        }
        s *= weight[0][a];
      } else {
        for (std::size_t b = 0; b < n; ++b) {
          if (weight[1][b] == 0.0) continue;
          x[1] = node[1][b];
          double inner = 0.0;
          for (std::size_t c = 0; c < n; ++c) {
            if (weight[2][c] == 0.0) continue;
            x[2] = node[2][c];
            inner += f(x) * weight[2][c];
          }
          s += inner * weight[1][b];
        }
        s *= weight[0][a];
      }
    }
    row_sum[a] = s;
  }
  double total = 0.0;
  for (double v : row_sum) total += v;
  return {total, 0.0, "midpoint"};
}

std::vector<IndexTuple> level_indices(const WaveletSpec& spec, std::size_t d, int J) {
  if (d == 0) throw ShapeError("level_indices: d must be positive");
  std::vector<WaveletIndex> axis;
  const long long first = 1 - (1LL << spec.q);
  for (long long k = first; k <= 0; ++k) axis.push_back({-1, k});
  for (int j = 0; j <= J; ++j) {
    for (long long k = first; k < (1LL << j); ++k) axis.push_back({j, k});
  }
  std::vector<IndexTuple> out;
  std::vector<std::size_t> pos(d, 0);
  while (true) {
    IndexTuple t(d);
    for (std::size_t r = 0; r < d; ++r) t[r] = axis[pos[r]];
    out.push_back(std::move(t));
    std::size_t r = d;
    while (r > 0) {
      --r;
      if (++pos[r] < axis.size()) break;
      pos[r] = 0;
      if (r == 0) return out;
    }
  }
}

int balancing_level(std::size_t n, double alpha, std::size_t d) {
  const double J = std::floor(std::log2(static_cast<double>(n)) / (2.0 * alpha + static_cast<double>(d)));
  return std::max(0, static_cast<int>(J));
}

WaveletEstimate::WaveletEstimate(WaveletSpec spec, std::vector<IndexTuple> indices, std::vector<double> coeffs)
    : spec_(std::move(spec)), indices_(std::move(indices)), coeffs_(std::move(coeffs)) {
  if (indices_.size() != coeffs_.size()) throw ShapeError("wavelet estimate: one coefficient per index");
}

double WaveletEstimate::operator()(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (coeffs_[i] != 0.0) s += coeffs_[i] * tensor_value(spec_, indices_[i], x);
  }
  return s;
}

std::vector<double> WaveletEstimate::operator()(const PointSet& points) const {
  std::vector<double> out(points.size());
  const long long n = static_cast<long long>(points.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (*this)(points.point(static_cast<std::size_t>(i)));
  return out;
}

WaveletEstimate wavelet_estimate(const WaveletSpec& spec, const RegressionDataset& data,
                                 std::vector<IndexTuple> indices) {
  std::vector<double> coeffs(indices.size());
  const long long m = static_cast<long long>(indices.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < m; ++i) {
    coeffs[static_cast<std::size_t>(i)] = empirical_coeff(spec, data, indices[static_cast<std::size_t>(i)]).value;
  }
  return WaveletEstimate(spec, std::move(indices), std::move(coeffs));
}

Estimator wavelet_estimator(const WaveletSpec& spec, double alpha) {
  return [spec, alpha](const RegressionDataset& data, std::uint64_t, ExperimentRow& row) {
    const int J = balancing_level(data.n(), alpha, data.d());
    auto est = wavelet_estimate(spec, data, level_indices(spec, data.d(), J));
    const auto fitted = est(data.X);
    double s = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) s += (data.Y[i] - fitted[i]) * (data.Y[i] - fitted[i]);
    row.empirical_risk = s / static_cast<double>(data.n());
    row.s_final = est.indices().size();
    return Predictor([est = std::move(est)](const PointSet& pts) { return est(pts); });
  };
}

Counterexample build_counterexample(int j, double alpha, double K, std::size_t d,
                                    const WaveletSpec& spec) {
  if (!(alpha > 0.0) || alpha > spec.r) {
    std::ostringstream msg;
    msg << "counterexample: alpha = " << alpha << " outside (0, r], r = " << spec.r;
    throw DomainError(msg.str());
  }
  if (d == 0) throw DomainError("counterexample: d must be positive");
  const int shift = spec.q + lattice_nu(d);
  if (j < shift) {
    std::ostringstream msg;
    msg << "counterexample: j = " << j << " below q + nu = " << shift;
    throw DomainError(msg.str());
  }
  if (!(K > 0.0)) throw DomainError("counterexample: K must be positive");
  const int e = std::abs(spec.mu0) > 1e-12 ? spec.r : static_cast<int>(d) * spec.r;
  const double amp = K * std::pow(2.0, -static_cast<double>(j) * alpha - 1.0);
  Counterexample c;
  c.j = j;
  c.alpha = alpha;
  c.K = K;
  c.d = d;
  c.h = [amp, e, j, shift](double u) {
    const double v = std::ldexp(u, j - shift);
    return amp * bump(v - std::floor(v), e);
  };
  c.f = [h = c.h](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return h(s);
  };
  return c;
}

double lattice_constant(const WaveletSpec& spec, std::size_t d) {
  const double q = spec.q;
  const double r = spec.r;
  const double nu = lattice_nu(d);
  const double dd = static_cast<double>(d);
  if (std::abs(spec.mu0) > 1e-12) {
    return dd / r * std::pow(2.0, -q * r - nu * r - 1.0) * std::pow(spec.mu0, dd - 1.0) * spec.mu_r;
  }
  const double binom = std::tgamma(dd * r + 1.0) / (std::tgamma(r + 1.0) * std::tgamma(dd * r - r + 1.0));
  return binom / (dd * r) * std::pow(2.0, -dd * q * r - dd * nu * r - 1.0) * std::pow(spec.mu_r, dd);
}

IndexTuple lattice_index(const WaveletSpec& spec, int j, std::span<const long long> p) {
  IndexTuple t;
  const long long step = 1LL << (spec.q + lattice_nu(p.size()));
  for (long long v : p) t.push_back({j, step * v});
  return t;
}

long long lattice_count_per_axis(const WaveletSpec& spec, int j, std::size_t d) {
  const int e = j - spec.q - lattice_nu(d);
  return e < 0 ? 0 : (1LL << e);
}

double risk_floor(std::span<const double> coefficients, double n) {
  if (!(n > 0.0)) throw DomainError("risk_floor: n must be positive");
  double s = 0.0;
  for (double c : coefficients) s += std::min(1.0 / n, c * c);
  return s;
}

FloorPoint family_floor(std::span<const LevelCoefficient> levels, double n) {
  if (!(n > 0.0)) throw DomainError("family_floor: n must be positive");
  FloorPoint best{-1.0, 0};
  for (const auto& l : levels) {
    const double v = l.count * std::min(1.0 / n, l.value * l.value);
    if (v > best.floor) best = {v, l.j};
  }
  if (best.floor < 0.0) best.floor = 0.0;
  return best;
}

std::vector<LevelCoefficient> family_coefficients(const WaveletSpec& spec, double alpha, double K,
                                                  std::size_t d, int j_min, int j_max,
                                                  const QuadOptions& opts) {
  std::vector<LevelCoefficient> out;
  const std::vector<long long> origin(d, 0);
  for (int j = j_min; j <= j_max; ++j) {
    const auto c = build_counterexample(j, alpha, K, d, spec);
    const auto q = quad_coeff(spec, c.f, lattice_index(spec, j, origin), opts);
    const double per_axis = static_cast<double>(lattice_count_per_axis(spec, j, d));
    out.push_back({j, q.value, std::pow(per_axis, static_cast<double>(d))});
  }
  return out;
}

}  // namespace relunet
