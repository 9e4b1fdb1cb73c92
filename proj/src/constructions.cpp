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

#include "relunet/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relunet/calculus.hpp"
#include "relunet/errors.hpp"
#include "relunet/grid.hpp"
#include "relunet/kernels.hpp"

namespace relunet {

namespace {

using nlohmann::json;

double relu(double x) { return x > 0.0 ? x : 0.0; }

std::vector<std::size_t> class_widths(std::size_t in, std::size_t hidden, std::size_t layers,
                                      std::size_t out) {
  std::vector<std::size_t> p{in};
  for (std::size_t i = 0; i < layers; ++i) p.push_back(hidden);
  p.push_back(out);
  return p;
}

std::vector<std::pair<double, double>> unit_cube(std::size_t r) { return {r, {0.0, 1.0}}; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

// Scalar output (u, v) -> (u - v)_+ ^ 1 in two hidden layers.
SparseNetwork clip_difference_net() {
  return SparseNetwork({Layer{MatrixBuilder(1, 2).add(0, 0, -1.0).add(0, 1, 1.0).build(), {-1.0}},
                        Layer{MatrixBuilder(1, 1).add(0, 0, -1.0).build(), {-1.0}},
                        Layer{SparseMatrix::identity(1), {}}});
}

SparseNetwork mult_net(int m) {
  const double q = 0.25;
  const double h = 0.5;
  std::vector<Layer> layers;
  MatrixBuilder w0(6, 2);
  w0.add(0, 0, q).add(0, 1, -q);  // T_+((x - y + 1)/2), shift -1/4
  w0.add(1, 0, h).add(1, 1, -h);  // T_-^1((x - y + 1)/2)
  w0.add(2, 0, h).add(2, 1, h);   // (x + y)/2
  w0.add(3, 0, q).add(3, 1, q);   // T_+((x + y)/2)
  w0.add(4, 0, h).add(4, 1, h);   // T_-^1((x + y)/2), shift 1/2
  layers.push_back(Layer{w0.build(), {-q, 0.0, 0.0, 0.0, h, -q}});  // last unit: constant 1/4
  for (int k = 1; k <= m; ++k) {
    MatrixBuilder w(6, 6);
    std::vector<double> shift(6, 0.0);
    for (std::size_t o : {std::size_t{0}, std::size_t{3}}) {
      w.add(o, o, h).add(o, o + 1, -h);
      w.add(o + 1, o, 1.0).add(o + 1, o + 1, -1.0);
      shift[o + 1] = std::ldexp(1.0, 1 - 2 * (k + 1));
      w.add(o + 2, o, 1.0).add(o + 2, o + 1, -1.0).add(o + 2, o + 2, 1.0);
    }
    layers.push_back(Layer{w.build(), std::move(shift)});
  }
  MatrixBuilder out(2, 6);
  out.add(0, 0, 1.0).add(0, 1, -1.0).add(0, 2, 1.0);
  out.add(1, 3, 1.0).add(1, 4, -1.0).add(1, 5, 1.0);
  layers.push_back(Layer{out.build(), {}});
  return compose(clip_difference_net(), SparseNetwork(std::move(layers)));
}

SparseNetwork select_net(std::size_t column, std::size_t input_dim) {
  return linear_net(MatrixBuilder(1, input_dim).add(0, column, 1.0).build());
}

json product_target(std::size_t r) { return {{"name", "product"}, {"params", {{"r", r}}}}; }

}  // namespace

int ceil_log2(double x) {
  if (!(x > 0.0)) throw DomainError("ceil_log2 needs a positive argument");
  int q = 0;
  while (std::ldexp(1.0, q) < x) ++q;
  return q;
}

double tri_wave_ref(int k, double x) {
  if (k < 1) throw DomainError("tooth map index must be >= 1");
  return relu(x / 2.0) - relu(x - std::ldexp(1.0, 1 - 2 * k));
}

double r_wave_ref(int k, double x) {
  if (k < 1) throw DomainError("triangle wave index must be >= 1");
  double y = x;
  for (int i = 1; i <= k; ++i) y = tri_wave_ref(i, y);
  return y;
}

Construction build_mult(int m) {
  require(m >= 1, "build_mult needs m >= 1");
  auto net = mult_net(m);
  Certificate cert;
  cert.statement_id = "mult";
  cert.depth = static_cast<std::size_t>(m) + 4;
  cert.width_bound = 6;
  cert.sparsity_bound = capacity(class_widths(2, 6, cert.depth, 1));
  cert.sup_error_bound = std::ldexp(1.0, -m);
  cert.domain = unit_cube(2);
  cert.target = product_target(2);
  cert.details = {{"m", m}};
  return {std::move(net), std::move(cert)};
}

SparseNetwork build_mult_tree(int m, std::span<const std::size_t> factor_columns, std::size_t input_dim) {
  require(m >= 1, "Mult tree needs m >= 1");
  const std::size_t k = factor_columns.size();
  require(k >= 1, "Mult tree needs at least one factor");
  for (std::size_t c : factor_columns) {
    if (c >= input_dim) throw ShapeError("Mult tree factor column out of range");
  }
  if (k == 1) return select_net(factor_columns[0], input_dim);
  const int levels = ceil_log2(static_cast<double>(k));
  const std::size_t width = std::size_t{1} << levels;
  // First hidden layer: the factors followed by constant ones (shift -1, no weights).
  MatrixBuilder pad(width, input_dim);
  for (std::size_t i = 0; i < k; ++i) pad.add(i, factor_columns[i], 1.0);
  std::vector<double> junction(width, 0.0);
  std::fill(junction.begin() + static_cast<std::ptrdiff_t>(k), junction.end(), -1.0);
  SparseNetwork current = linear_net(pad.build());
  const SparseNetwork mult = mult_net(m);
  std::size_t n = width;
  for (int level = 0; level < levels; ++level) {
    std::vector<SparseNetwork> pairs;
    for (std::size_t i = 0; i < n / 2; ++i) {
      const std::size_t cols[2] = {2 * i, 2 * i + 1};
      pairs.push_back(embed_inputs(mult, cols, n));
    }
    const auto stage = parallelize(pairs);
    current = level == 0 ? compose(stage, current, junction) : compose(stage, current);
    n /= 2;
  }
  return current;
}

Construction build_mult_r(int m, int r) {
  require(m >= 1, "build_mult_r needs m >= 1");
  require(r >= 1, "build_mult_r needs r >= 1");
  std::vector<std::size_t> cols(static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
  auto net = build_mult_tree(m, cols, cols.size());
  const int lg = ceil_log2(r);
  Certificate cert;
  cert.statement_id = "mult_r";
  cert.depth = static_cast<std::size_t>((m + 5) * lg);
  cert.width_bound = 6 * static_cast<std::uint64_t>(r);
  cert.sparsity_bound = 42ull * r * r * (1 + static_cast<std::uint64_t>((m + 5) * lg));
  cert.sup_error_bound = r == 1 ? 0.0 : static_cast<double>(r * r) * std::ldexp(1.0, -m);
  cert.domain = unit_cube(cols.size());
  cert.target = product_target(cols.size());
  cert.details = {{"m", m}, {"r", r}};
  return {std::move(net), std::move(cert)};
}

Construction build_mon(int m, double gamma, int r) {
  require(m >= 1, "build_mon needs m >= 1");
  require(gamma > 0.0, "build_mon needs gamma > 0");
  require(r >= 1, "build_mon needs r >= 1");
  const auto dim = static_cast<std::size_t>(r);
  const auto indices = multi_indices_below(dim, gamma);
  const std::size_t depth = 1 + static_cast<std::size_t>((m + 5) * ceil_log2(std::max(gamma, 1.0)));
  std::vector<SparseNetwork> members;
  int top = 0;
  for (const auto& alpha : indices) {
    const int deg = degree(alpha);
    top = std::max(top, deg);
    SparseNetwork member = identity_net(1);
    if (deg == 0) {
      member = SparseNetwork({Layer{SparseMatrix(1, dim), {-1.0}}, Layer{SparseMatrix::identity(1), {}}});
    } else if (deg == 1) {
      const auto i = static_cast<std::size_t>(std::find(alpha.begin(), alpha.end(), 1) - alpha.begin());
      member = SparseNetwork({Layer{MatrixBuilder(1, dim).add(0, i, 1.0).build(), {0.0}},
                              Layer{SparseMatrix::identity(1), {}}});
    } else {
      std::vector<std::size_t> cols;
      for (std::size_t i = 0; i < dim; ++i) cols.insert(cols.end(), static_cast<std::size_t>(alpha[i]), i);
      member = build_mult_tree(m, cols, dim);
    }
    members.push_back(sync_depth(member, static_cast<long long>(depth - member.depth()), SyncSide::kOutput));
  }
  auto net = parallelize(members);
  const std::size_t count = indices.size();
  Certificate cert;
  cert.statement_id = "mon";
  cert.depth = depth;
  cert.width_bound = 6 * static_cast<std::uint64_t>(std::ceil(gamma)) * count;
  cert.sparsity_bound = capacity(class_widths(dim, cert.width_bound, depth, count));
  cert.sup_error_bound = top >= 2 ? gamma * gamma * std::ldexp(1.0, -m) : 0.0;
  cert.domain = unit_cube(dim);
  cert.target = {{"name", "monomials"}, {"params", {{"r", r}, {"gamma", gamma}}}};
  cert.details = {{"m", m}, {"output_layout", indices}, {"order", "graded, descending exponent tuple"}};
  return {std::move(net), std::move(cert)};
}

Construction build_hat(int M, int m, int r) {
  require(M >= 1, "build_hat needs M >= 1");
  require(m >= 1, "build_hat needs m >= 1");
  require(r >= 1, "build_hat needs r >= 1");
  const auto dim = static_cast<std::size_t>(r);
  const auto side = static_cast<std::size_t>(M) + 1;
  double points = 1.0;
  for (std::size_t j = 0; j < dim; ++j) points *= static_cast<double>(side);
  if (points > static_cast<double>(kMaxHatGridPoints)) {
    std::ostringstream msg;
    msg << "build_hat refuses (M+1)^r = " << points << " grid points (limit " << kMaxHatGridPoints
        << "); every grid point needs its own product network";
    throw DomainError(msg.str());
  }
  const auto grid = static_cast<std::size_t>(points);
  const double inv = 1.0 / M;
  // Hidden layer 1: (x_j - l/M)_+ and (l/M - x_j)_+; the output -a-b becomes
  // (1/M - a - b)_+ through the junction shift -1/M.
  MatrixBuilder w0(2 * dim * side, dim);
  std::vector<double> shift0(2 * dim * side);
  MatrixBuilder w1(dim * side, 2 * dim * side);
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t l = 0; l < side; ++l) {
      const std::size_t u = j * side + l;
      w0.add(2 * u, j, 1.0).add(2 * u + 1, j, -1.0);
      shift0[2 * u] = static_cast<double>(l) * inv;
      shift0[2 * u + 1] = -static_cast<double>(l) * inv;
      w1.add(u, 2 * u, -1.0).add(u, 2 * u + 1, -1.0);
    }
  }
  const SparseNetwork inner({Layer{w0.build(), std::move(shift0)}, Layer{w1.build(), {}}});
  const std::vector<double> junction(dim * side, -inv);
  SparseNetwork outer = identity_net(side);
  if (dim > 1) {
    std::vector<SparseNetwork> products;
    products.reserve(grid);
    std::vector<std::size_t> l(dim, 0);
    std::vector<std::size_t> cols(dim);
    for (std::size_t g = 0; g < grid; ++g) {
      for (std::size_t j = 0; j < dim; ++j) cols[j] = j * side + l[j];
      products.push_back(build_mult_tree(m, cols, dim * side));
      for (std::size_t j = dim; j-- > 0;) {
        if (++l[j] < side) break;
        l[j] = 0;
      }
    }
    outer = parallelize(products);
  }
  auto net = compose(outer, inner, junction);
  const int lg = ceil_log2(r);
  Certificate cert;
  cert.statement_id = "hat";
  cert.depth = 2 + static_cast<std::size_t>((m + 5) * lg);
  cert.width_bound = 6 * static_cast<std::uint64_t>(r) * grid;
  cert.sparsity_bound = 49ull * r * r * grid * (1 + static_cast<std::uint64_t>((m + 5) * lg));
  cert.sup_error_bound = static_cast<double>(r * r) * std::ldexp(1.0, -m);
  cert.domain = unit_cube(dim);
  cert.target = {{"name", "hat_products"}, {"params", {{"M", M}, {"r", r}}}};
  cert.details = {{"m", m}, {"order", "grid points, first coordinate slowest"}};
  return {std::move(net), std::move(cert)};
}

double partial_derivative(const HolderTarget& f, std::span<const int> alpha, std::span<const double> a) {
  if (f.partial) return f.partial(alpha, a);
  const auto it = std::find_if(alpha.begin(), alpha.end(), [](int v) { return v > 0; });
  if (it == alpha.end()) return f.value(a);
  const auto i = static_cast<std::size_t>(it - alpha.begin());
  std::vector<int> lower(alpha.begin(), alpha.end());
  --lower[i];
  std::vector<double> x(a.begin(), a.end());
  const double h = kFiniteDifferenceStep;
  x[i] = a[i] + h;
  const double up = partial_derivative(f, lower, x);
  x[i] = a[i] - h;
  const double down = partial_derivative(f, lower, x);
  return (up - down) / (2.0 * h);
}

double TaylorPolynomial::operator()(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < indices.size(); ++k) s += coeffs[k] * power(x, indices[k]);
  return s;
}

namespace {

std::string format_index(std::span<const int> alpha) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < alpha.size(); ++i) s << (i ? "," : "") << alpha[i];
  s << ")";
  return s.str();
}

std::vector<double> derivatives_at(const HolderTarget& f, const std::vector<MultiIndex>& indices,
                                   std::span<const double> a) {
  std::vector<double> d;
  d.reserve(indices.size());
  for (const auto& alpha : indices) {
    try {
      d.push_back(partial_derivative(f, alpha, a));
    } catch (const std::exception& e) {
      throw DomainError("derivative " + format_index(alpha) + " failed: " + e.what());
    }
    if (!std::isfinite(d.back())) throw DomainError("derivative " + format_index(alpha) + " is not finite");
  }
  return d;
}

}  // namespace

TaylorPolynomial taylor_poly(const HolderTarget& f, std::span<const double> a) {
  if (a.size() != f.r) throw ShapeError("taylor_poly: expansion point has wrong dimension");
  TaylorPolynomial p;
  p.indices = multi_indices_below(f.r, f.beta);
  p.provenance = f.partial ? DerivativeProvenance::kExact : DerivativeProvenance::kFiniteDifference;
  const auto d = derivatives_at(f, p.indices, a);
  std::vector<double> minus_a(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) minus_a[i] = -a[i];
  p.coeffs.assign(p.indices.size(), 0.0);
  std::vector<int> diff(f.r);
  for (std::size_t g = 0; g < p.indices.size(); ++g) {
    const auto& gamma = p.indices[g];
    const double gf = factorial(gamma);
    for (std::size_t k = 0; k < p.indices.size(); ++k) {
      const auto& alpha = p.indices[k];
      bool dominates = true;
      for (std::size_t i = 0; i < f.r; ++i) {
        diff[i] = alpha[i] - gamma[i];
        dominates = dominates && diff[i] >= 0;
      }
      if (!dominates) continue;
      p.coeffs[g] += d[k] * power(minus_a, diff) / (gf * factorial(diff));
    }
  }
  return p;
}

double reference_hat(int M, std::span<const int> l, std::span<const double> x) {
  double w = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) w *= relu(1.0 - M * std::abs(x[j] - static_cast<double>(l[j]) / M));
  return w;
}

double local_taylor_ref(const HolderTarget& f, int M, std::span<const double> x) {
  if (M < 1) throw DomainError("local_taylor_ref needs M >= 1");
  if (x.size() != f.r) throw ShapeError("local_taylor_ref: point has wrong dimension");
  const auto indices = multi_indices_below(f.r, f.beta);
  // Only grid points within 1/M in every coordinate carry weight.
  std::vector<std::vector<int>> axis(f.r);
  for (std::size_t j = 0; j < f.r; ++j) {
    const int lo = std::clamp(static_cast<int>(std::floor(x[j] * M)), 0, M);
    axis[j].push_back(lo);
    if (lo + 1 <= M) axis[j].push_back(lo + 1);
  }
  std::vector<std::size_t> pos(f.r, 0);
  std::vector<int> l(f.r);
  std::vector<double> a(f.r);
  std::vector<double> dx(f.r);
  double total = 0.0;
  while (true) {
    for (std::size_t j = 0; j < f.r; ++j) {
      l[j] = axis[j][pos[j]];
      a[j] = static_cast<double>(l[j]) / M;
      dx[j] = x[j] - a[j];
    }
    const double w = reference_hat(M, l, x);
    if (w > 0.0) {
      const auto d = derivatives_at(f, indices, a);
      double p = 0.0;
      for (std::size_t k = 0; k < indices.size(); ++k) p += d[k] * power(dx, indices[k]) / factorial(indices[k]);
      total += w * p;
    }
    std::size_t j = f.r;
    while (j-- > 0) {
      if (++pos[j] < axis[j].size()) break;
      pos[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

double holder_net_min_N(std::size_t r, double beta, double K) {
  const double rr = static_cast<double>(r);
  return std::max(std::pow(beta + 1.0, rr), (K + 1.0) * std::exp(rr));
}

Construction build_holder_net(const HolderTarget& f, int m, long long N, const HolderNetOptions& options) {
  require(m >= 1, "build_holder_net needs m >= 1");
  require(f.r >= 1 && f.beta > 0.0 && f.K > 0.0, "build_holder_net needs r >= 1, beta > 0 and K > 0");
  const double need = holder_net_min_N(f.r, f.beta, f.K);
  if (static_cast<double>(N) < need) {
    std::ostringstream msg;
    msg << "N = " << N << " violates N >= (beta+1)^r v (K+1)e^r = " << need;
    throw DomainError(msg.str());
  }
  const auto r = f.r;
  const double rr = static_cast<double>(r);
  int M = 1;
  while (std::pow(static_cast<double>(M + 2), rr) <= static_cast<double>(N)) ++M;
  double Mr = 1.0;
  std::size_t grid = 1;
  for (std::size_t j = 0; j < r; ++j) {
    Mr *= M;
    grid *= static_cast<std::size_t>(M) + 1;
  }
  const int lstar = (m + 5) * ceil_log2(std::max(f.beta, rr));
  const double B = std::ceil(2.0 * f.K * std::exp(rr));

  // Q1: rescaled Taylor coefficients of every grid point applied to the monomials.
  auto mon = build_mon(m, f.beta, static_cast<int>(r));
  const auto indices = multi_indices_below(r, f.beta);
  auto mon_net = sync_depth(mon.net, static_cast<long long>(1 + lstar) - static_cast<long long>(mon.net.depth()),
                            SyncSide::kOutput);
  MatrixBuilder coeff(grid, indices.size());
  DerivativeProvenance provenance = DerivativeProvenance::kExact;
  {
    std::vector<std::size_t> l(r, 0);
    std::vector<double> a(r);
    for (std::size_t g = 0; g < grid; ++g) {
      for (std::size_t j = 0; j < r; ++j) a[j] = static_cast<double>(l[j]) / M;
      const auto poly = taylor_poly(f, a);
      provenance = poly.provenance;
      for (std::size_t k = 0; k < indices.size(); ++k) {
        const double w = poly.coeffs[k] / B + (k == 0 ? 0.5 : 0.0);
        if (std::abs(w) > 1.0) {
          std::ostringstream msg;
          msg << "Taylor coefficient " << poly.coeffs[k] << " at grid point " << g
              << " exceeds the Hoelder radius K = " << f.K;
          throw DomainError(msg.str());
        }
        coeff.add(g, k, w);
      }
      for (std::size_t j = r; j-- > 0;) {
        if (++l[j] <= static_cast<std::size_t>(M)) break;
        l[j] = 0;
      }
    }
  }
  const auto q1 = compose(linear_net(coeff.build()), mon_net);
  auto hat = build_hat(M, m, static_cast<int>(r));
  const auto hat_net = sync_depth(hat.net, static_cast<long long>(q1.depth() - hat.net.depth()), SyncSide::kOutput);
  const std::vector<SparseNetwork> stage_parts{q1, hat_net};
  const auto stage = parallelize(stage_parts);

  // Q2: sum over grid points of Mult(Q1_l, Hat_l).
  const auto mult = mult_net(m);
  std::vector<SparseNetwork> products;
  products.reserve(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const std::size_t cols[2] = {g, grid + g};
    products.push_back(embed_inputs(mult, cols, 2 * grid));
  }
  MatrixBuilder ones(1, grid);
  for (std::size_t g = 0; g < grid; ++g) ones.add(0, g, 1.0);
  const auto q2 = compose(linear_net(ones.build()), compose(parallelize(products), stage));

  // a -> B M^r (a - c) with c = 1/(2 M^r), unit weights only.
  const auto fan = static_cast<std::size_t>(Mr);
  const auto b = static_cast<std::size_t>(B);
  const double c = 1.0 / (2.0 * Mr);
  MatrixBuilder s0(2, 1);
  s0.add(0, 0, 1.0).add(1, 0, -1.0);
  MatrixBuilder s1(2 * fan, 2);
  MatrixBuilder s2(2, 2 * fan);
  for (std::size_t i = 0; i < fan; ++i) {
    s1.add(i, 0, 1.0).add(fan + i, 1, 1.0);
    s2.add(0, i, 1.0).add(1, fan + i, 1.0);
  }
  MatrixBuilder s3(2 * b, 2);
  MatrixBuilder s4(1, 2 * b);
  for (std::size_t i = 0; i < b; ++i) {
    s3.add(i, 0, 1.0).add(b + i, 1, 1.0);
    s4.add(0, i, 1.0).add(0, b + i, -1.0);
  }
  const SparseNetwork scale({Layer{s0.build(), {c, -c}}, Layer{s1.build(), std::vector<double>(2 * fan, 0.0)},
                             Layer{s2.build(), {0.0, 0.0}}, Layer{s3.build(), std::vector<double>(2 * b, 0.0)},
                             Layer{s4.build(), {}}});
  auto net = compose(scale, q2);

  const double beta = f.beta;
  const double Nd = static_cast<double>(N);
  Certificate cert;
  cert.statement_id = "holder";
  cert.depth = 8 + static_cast<std::size_t>((m + 5) * (1 + ceil_log2(std::max(rr, beta))));
  cert.width_bound = ceil_to_u64(6.0 * (rr + std::ceil(beta)) * Nd);
  cert.sparsity_bound = ceil_to_u64(141.0 * std::pow(rr + beta + 1.0, 3.0 + rr) * Nd * (m + 6));
  cert.sup_error_bound = (2.0 * f.K + 1.0) * (1.0 + rr * rr + beta * beta) * std::pow(6.0, rr) * Nd *
                             std::ldexp(1.0, -m) +
                         f.K * std::pow(3.0, beta) * std::pow(Nd, -beta / rr);
  cert.domain = unit_cube(r);
  cert.target = f.description;
  cert.derivative_provenance = provenance;
  cert.details = {{"m", m}, {"N", N}, {"M", M}, {"B", B}, {"L_star", lstar}, {"r", r}, {"beta", beta}, {"K", f.K}};
  if (options.sup_norm) {
    const auto g = standard_grid(r, m);
    const auto y = evaluate_batch(net, g.points);
    double top = 0.0;
    for (double v : y) top = std::max(top, std::abs(v));
    const double factor = top > 0.0 ? std::min(1.0, *options.sup_norm / top) : 1.0;
    net = scale_output(net, factor).with_sup_bound(*options.sup_norm);
    cert.sup_error_bound *= 2.0;
    cert.details["sup_rescale"] = {{"sup_norm", *options.sup_norm}, {"factor", factor}, {"grid", g.spec}};
  }
  return {std::move(net), std::move(cert)};
}

void validate(const CompositionSpec& spec) {
  if (spec.input_dim == 0) throw DomainError("composition: input dimension must be positive");
  if (spec.levels.empty()) throw DomainError("composition: at least one level is required");
  std::size_t d = spec.input_dim;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    const auto& level = spec.levels[i];
    const std::string where = "level " + std::to_string(i);
    if (level.components.empty()) throw DomainError(where + ": no components");
    if (!(level.beta > 0.0) || !(level.K > 0.0)) throw DomainError(where + ": beta and K must be positive");
    for (std::size_t j = 0; j < level.components.size(); ++j) {
      const auto& c = level.components[j];
      const std::string cw = where + " component " + std::to_string(j);
      if (c.vars.empty() || c.vars.size() > level.t) {
        throw DomainError(cw + ": depends on " + std::to_string(c.vars.size()) + " variables, allowed 1.." +
                          std::to_string(level.t));
      }
      if (c.g.r != c.vars.size()) throw DomainError(cw + ": arity does not match the variable subset");
      if (!c.g.value) throw DomainError(cw + ": missing value function");
      for (std::size_t k = 0; k < c.vars.size(); ++k) {
        if (c.vars[k] >= d) throw DomainError(cw + ": variable index out of range");
        for (std::size_t l = 0; l < k; ++l) {
          if (c.vars[l] == c.vars[k]) throw DomainError(cw + ": repeated variable");
        }
      }
    }
    d = level.components.size();
  }
  if (d != 1) throw DomainError("composition: the last level must have exactly one component");
}

double evaluate_composite(const CompositionSpec& spec, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> sub;
  for (const auto& level : spec.levels) {
    std::vector<double> next;
    for (const auto& c : level.components) {
      sub.clear();
      for (std::size_t v : c.vars) sub.push_back(y[v]);
      next.push_back(c.g.value(sub));
    }
    y = std::move(next);
  }
  return y[0];
}

std::vector<RescaledLevel> rescale_components(const CompositionSpec& spec) {
  validate(spec);
  const std::size_t q = spec.q();
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    if (spec.levels[i].K < 1.0) {
      throw DomainError("level " + std::to_string(i) + ": radius K = " + std::to_string(spec.levels[i].K) +
                        " < 1; radii must be at least one");
    }
  }
  std::vector<RescaledLevel> out(spec.levels.size());
  for (std::size_t i = 0; i <= q; ++i) {
    const auto& level = spec.levels[i];
    const double in_scale = i == 0 ? 1.0 : 2.0 * spec.levels[i - 1].K;
    const double in_shift = i == 0 ? 0.0 : -spec.levels[i - 1].K;
    const bool wrap = i < q;
    const double out_scale = wrap ? 1.0 / (2.0 * level.K) : 1.0;
    const double out_shift = wrap ? 0.5 : 0.0;
    if (q == 0) {
      out[i].radius = level.K;
    } else if (i == 0) {
      out[i].radius = 1.0;
    } else if (i < q) {
      out[i].radius = std::pow(2.0 * spec.levels[i - 1].K, level.beta);
    } else {
      out[i].radius = level.K * std::pow(2.0 * spec.levels[i - 1].K, level.beta);
    }
    for (const auto& c : level.components) {
      HolderTarget h;
      h.r = c.g.r;
      h.beta = level.beta;
      h.K = out[i].radius;
      const auto g = c.g;
      h.value = [g, in_scale, in_shift, out_scale, out_shift](std::span<const double> x) {
        std::vector<double> y(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) y[k] = in_scale * x[k] + in_shift;
        return out_scale * g.value(y) + out_shift;
      };
      if (g.partial) {
        h.partial = [g, in_scale, in_shift, out_scale, out_shift](std::span<const int> alpha,
                                                                   std::span<const double> x) {
          std::vector<double> y(x.size());
          for (std::size_t k = 0; k < x.size(); ++k) y[k] = in_scale * x[k] + in_shift;
          const int deg = degree(alpha);
          const double base = out_scale * std::pow(in_scale, deg) * g.partial(alpha, y);
          return deg == 0 ? base + out_shift : base;
        };
      }
      h.description = {{"name", "rescaled"},
                       {"params", {{"level", i}, {"component", c.g.description}, {"in_scale", in_scale},
                                   {"in_shift", in_shift}, {"out_scale", out_scale}, {"out_shift", out_shift}}}};
      out[i].h.push_back(std::move(h));
    }
  }
  return out;
}

double evaluate_rescaled(const CompositionSpec& spec, const std::vector<RescaledLevel>& h,
                         std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  std::vector<double> sub;
  for (std::size_t i = 0; i < spec.levels.size(); ++i) {
    std::vector<double> next;
    for (std::size_t j = 0; j < spec.levels[i].components.size(); ++j) {
      sub.clear();
      for (std::size_t v : spec.levels[i].components[j].vars) sub.push_back(y[v]);
      next.push_back(h[i].h[j].value(sub));
    }
    y = std::move(next);
  }
  return y[0];
}

double composition_error_bound(std::span<const double> per_level_errors, const CompositionSpec& spec) {
  const std::size_t levels = spec.levels.size();
  if (per_level_errors.size() != levels) throw ShapeError("composition_error_bound: one error per level required");
  for (double e : per_level_errors) {
    if (!(e >= 0.0)) throw DomainError("composition_error_bound: errors must be non-negative");
  }
  const std::size_t q = levels - 1;
  double front = spec.levels[q].K;
  for (std::size_t l = 0; l < q; ++l) front *= std::pow(2.0 * spec.levels[l].K, spec.levels[l + 1].beta);
  double sum = 0.0;
  for (std::size_t i = 0; i <= q; ++i) {
    double expo = 1.0;
    for (std::size_t l = i + 1; l <= q; ++l) expo *= std::min(spec.levels[l].beta, 1.0);
    sum += std::pow(per_level_errors[i], expo);
  }
  return front * sum;
}

Construction build_composite_net(const CompositionSpec& spec, int m, std::span<const long long> N_per_level) {
  const auto h = rescale_components(spec);
  const std::size_t q = spec.q();
  if (N_per_level.size() != spec.levels.size()) {
    throw ShapeError("build_composite_net: one N per level required");
  }
  std::vector<double> level_errors;
  std::uint64_t width_bound = 0;
  std::uint64_t sparsity_bound = 0;
  std::size_t depth_claim = q;
  DerivativeProvenance provenance = DerivativeProvenance::kExact;
  json levels_doc = json::array();
  std::optional<SparseNetwork> net;
  std::size_t d = spec.input_dim;
  for (std::size_t i = 0; i <= q; ++i) {
    const auto& level = spec.levels[i];
    std::vector<Construction> parts;
    for (std::size_t j = 0; j < level.components.size(); ++j) {
      try {
        auto c = build_holder_net(h[i].h[j], m, N_per_level[i]);
        if (i < q) {
          c.net = clip_unit(c.net);
          c.cert.depth += 2;
          c.cert.sparsity_bound += 4;
        }
        if (c.cert.derivative_provenance == DerivativeProvenance::kFiniteDifference) {
          provenance = DerivativeProvenance::kFiniteDifference;
        }
        parts.push_back(std::move(c));
      } catch (const DomainError& e) {
        throw DomainError("level " + std::to_string(i) + " component " + std::to_string(j) + ": " + e.what());
      }
    }
    std::size_t level_depth = 0;
    for (const auto& p : parts) level_depth = std::max(level_depth, p.net.depth());
    std::vector<SparseNetwork> members;
    double err = 0.0;
    std::uint64_t widths = 0;
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto& vars = level.components[j].vars;
      const auto extra = level_depth - parts[j].net.depth();
      const auto synced = sync_depth(parts[j].net, static_cast<long long>(extra));
      members.push_back(embed_inputs(synced, vars, d));
      err = std::max(err, parts[j].cert.sup_error_bound);
      widths += std::max<std::uint64_t>(parts[j].cert.width_bound, vars.size());
      sparsity_bound += parts[j].cert.sparsity_bound + extra * vars.size();
    }
    width_bound = std::max(width_bound, widths);
    depth_claim += level_depth;
    level_errors.push_back(err);
    levels_doc.push_back({{"depth", level_depth}, {"error_bound", err}, {"N", N_per_level[i]},
                          {"radius", h[i].radius}});
    auto stage = parallelize(members);
    net = net ? compose(stage, *net) : std::move(stage);
    d = level.components.size();
  }
  Certificate cert;
  cert.statement_id = "composite";
  cert.depth = depth_claim;
  cert.width_bound = width_bound;
  cert.sparsity_bound = sparsity_bound;
  cert.sup_error_bound = composition_error_bound(level_errors, spec);
  cert.domain = unit_cube(spec.input_dim);
  cert.target = {{"name", "composite"}, {"params", spec.description}};
  cert.derivative_provenance = provenance;
  cert.details = {{"m", m}, {"levels", levels_doc}};
  return {std::move(*net), std::move(cert)};
}

}  // namespace relunet
