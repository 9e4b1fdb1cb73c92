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

#include "relunet/cli.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "relunet/certificate.hpp"
#include "relunet/constructions.hpp"
#include "relunet/errors.hpp"
#include "relunet/grid.hpp"
#include "relunet/kernels.hpp"
#include "relunet/rates.hpp"
#include "relunet/regression.hpp"
#include "relunet/serialize.hpp"
#include "relunet/targets.hpp"
#include "relunet/wavelet.hpp"

namespace relunet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << content;
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

fs::path output_dir(const std::string& flag, const json* config) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  if (config != nullptr && config->contains("output_dir")) return (*config)["output_dir"].get<std::string>();
  return ".";
}

struct Meta {
  std::string digest;
  std::uint64_t seed = 0;
};

json meta_json(const Meta& m) {
  return {{"tool", "relunet"}, {"version", RELUNET_VERSION}, {"config_sha256", m.digest}, {"seed", m.seed}};
}

std::string csv_preamble(const Meta& m) {
  std::ostringstream s;
  s << "# relunet " << RELUNET_VERSION << "\n# config_sha256 " << m.digest << "\n# seed " << m.seed << "\n";
  return s.str();
}

// Config access with field-named errors.
const json& field(const json& doc, const std::string& name, const std::string& prefix = "") {
  if (!doc.is_object() || !doc.contains(name)) throw ParseError("config field '" + prefix + name + "': missing");
  return doc[name];
}

template <class T>
T get(const json& doc, const std::string& name, const std::string& prefix = "") {
  const auto& v = field(doc, name, prefix);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ParseError("config field '" + prefix + name + "': wrong type");
  }
}

template <class T>
T get_or(const json& doc, const std::string& name, T fallback, const std::string& prefix = "") {
  if (!doc.is_object() || !doc.contains(name)) return fallback;
  return get<T>(doc, name, prefix);
}

std::vector<std::size_t> n_grid_of(const json& doc, const std::string& prefix = "") {
  const auto g = get<std::vector<std::size_t>>(doc, "n_grid", prefix);
  if (g.size() < 4) throw ParseError("config field '" + prefix + "n_grid': at least 4 sample sizes are needed for a slope");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0 || (i > 0 && g[i] <= g[i - 1])) {
      throw ParseError("config field '" + prefix + "n_grid': must be positive and strictly increasing");
    }
  }
  return g;
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string kind;
  std::optional<int> m;
  std::optional<int> r;
  std::optional<double> gamma;
  std::optional<int> M;
  std::optional<double> beta;
  std::string N;
  std::optional<double> K;
  std::optional<double> sup_norm;
  std::string target;
  std::string spec;
  std::string name;
  std::string out;
};

template <class T>
T need(const std::optional<T>& v, const std::string& kind, const std::string& flag) {
  if (!v) throw UsageError("construct " + kind + ": " + flag + " is required");
  return *v;
}

json target_doc(const std::string& arg) {
  if (arg.empty()) throw UsageError("construct holder: --target is required");
  const auto text = !arg.empty() && arg.front() == '{' ? arg : read_file(arg);
  return parse_json(text, "target");
}

int cmd_construct(const ConstructArgs& a, const std::vector<std::string>& argv, std::ostream& out,
                  std::ostream& err) {
  std::string joined;
  for (const auto& s : argv) joined += s + '\n';
  Meta meta{sha256_hex(joined), 0};
  std::optional<Construction> c;
  int m = 0;
  const auto& k = a.kind;
  if (k == "mult") {
    m = need(a.m, k, "--m");
    c = build_mult(m);
  } else if (k == "mult_r") {
    m = need(a.m, k, "--m");
    c = build_mult_r(m, need(a.r, k, "--r"));
  } else if (k == "mon") {
    m = need(a.m, k, "--m");
    c = build_mon(m, need(a.gamma, k, "--gamma"), need(a.r, k, "--r"));
  } else if (k == "hat") {
    m = need(a.m, k, "--m");
    c = build_hat(need(a.M, k, "--M"), m, need(a.r, k, "--r"));
  } else if (k == "holder") {
    m = need(a.m, k, "--m");
    const auto doc = target_doc(a.target);
    const double beta = a.beta ? *a.beta : get<double>(doc, "beta");
    const double K = a.K ? *a.K : get_or<double>(doc, "K", 1.0);
    const json desc = doc.contains("target") ? doc["target"] : json{{"name", doc.at("name")}, {"params", doc.value("params", json::object())}};
    auto f = holder_target(desc, beta, K);
    if (a.r && *a.r != static_cast<int>(f.r)) {
      throw UsageError("construct holder: --r " + std::to_string(*a.r) + " does not match the target dimension " + std::to_string(f.r));
    }
    if (a.N.empty()) throw UsageError("construct holder: --N is required");
    HolderNetOptions opts;
    opts.sup_norm = a.sup_norm;
    c = build_holder_net(f, m, std::stoll(a.N), opts);
  } else if (k == "composite") {
    if (a.spec.empty()) throw UsageError("construct composite: --spec is required");
    const auto doc = parse_json(read_file(a.spec), "spec");
    m = a.m ? *a.m : get<int>(doc, "m");
    std::vector<long long> N;
    if (!a.N.empty()) {
      std::stringstream ss(a.N);
      std::string part;
      while (std::getline(ss, part, ',')) N.push_back(std::stoll(part));
    } else {
      N = get<std::vector<long long>>(doc, "N");
    }
    c = build_composite_net(composition_from_json(doc), m, N);
  } else {
    throw UsageError("construct: unknown construction '" + k + "' (mult, mult_r, mon, hat, holder, composite)");
  }

  auto& cert = c->cert;
  const auto grid = standard_grid(c->net.input_dim(), m);
  const auto ref = reference_target(cert.target);
  const auto e = sup_error(c->net, grid.points, ref.fn);
  cert.measured_grid_error = e.value;
  cert.grid_spec = grid.spec;

  const fs::path dir = output_dir(a.out, nullptr);
  const std::string stem = a.name.empty() ? cert.statement_id : a.name;
  auto net_doc = network_to_json(c->net);
  net_doc["meta"] = meta_json(meta);
  auto cert_doc = certificate_to_json(cert);
  cert_doc["meta"] = meta_json(meta);
  write_file(dir / (stem + ".net.json"), net_doc.dump(1) + "\n");
  write_file(dir / (stem + ".cert.json"), cert_doc.dump(2) + "\n");

  const auto stats = count_active(c->net);
  out << "wrote " << (dir / (stem + ".net.json")).string() << " and " << (dir / (stem + ".cert.json")).string() << "\n";
  out << "depth " << c->net.depth() << "  max width " << c->net.max_hidden_width() << "  active " << stats.active
      << "  capacity " << stats.capacity << "\n";
  out << "sup error bound " << num(cert.sup_error_bound) << "  measured " << num(e.value) << " on " << grid.spec << "\n";
  if (e.value > cert.sup_error_bound) {
    err << "measured grid error exceeds the certificate bound\n";
    return kExitClaimFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- certify

Grid grid_from_arg(const std::string& arg, std::size_t dim, const Certificate& cert) {
  if (arg.empty() || arg == "standard") {
    if (!cert.details.contains("m")) throw UsageError("certify: certificate has no m; pass --grid uniform:N or halton:N");
    return standard_grid(dim, cert.details["m"].get<int>());
  }
  const auto colon = arg.find(':');
  const auto kind = arg.substr(0, colon);
  if (colon == std::string::npos) throw UsageError("certify: --grid expects standard, uniform:N or halton:N");
  const auto n = std::stoull(arg.substr(colon + 1));
  if (kind == "uniform") return uniform_grid(dim, n);
  if (kind == "halton") return halton_points(dim, n);
  throw UsageError("certify: unknown grid '" + kind + "'");
}

int cmd_certify(const std::string& net_path, const std::string& cert_path, const std::string& grid_arg,
                std::ostream& out, std::ostream& err) {
  const auto net = network_from_json(parse_json(read_file(net_path), "network"));
  const auto cert = certificate_from_json(parse_json(read_file(cert_path), "certificate"));
  auto checks = check_structure(net, cert);
  const auto grid = grid_from_arg(grid_arg, net.input_dim(), cert);
  const auto ref = reference_target(cert.target);
  if (ref.input_dim != net.input_dim() || ref.output_dim != net.output_dim()) {
    throw ShapeError("certificate target does not match the network's input/output dimensions");
  }
  const auto e = sup_error(net, grid.points, ref.fn);
  checks.push_back({"sup_error", num(cert.sup_error_bound), num(e.value), e.value <= cert.sup_error_bound});

  out << std::left << std::setw(16) << "claim" << std::setw(26) << "claimed" << std::setw(26) << "measured"
      << "status\n";
  bool ok = true;
  for (const auto& c : checks) {
    out << std::setw(16) << c.claim << std::setw(26) << c.claimed << std::setw(26) << c.measured
        << (c.holds ? "ok" : "FAILED") << "\n";
    ok = ok && c.holds;
  }
  out << "grid " << grid.spec << "; derivative provenance " << to_string(cert.derivative_provenance) << "\n";
  if (!ok) {
    err << "failed claims:";
    for (const auto& c : checks) {
      if (!c.holds) err << " " << c.claim;
    }
    err << "\n";
    return kExitClaimFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- eval

std::vector<double> parse_row(const std::string& line) {
  std::vector<double> v;
  std::stringstream ss(line);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw ParseError("cannot read '" + part + "' as a number");
    }
  }
  return v;
}

int cmd_eval(const std::string& net_path, const std::string& x, const std::string& points,
             std::ostream& out) {
  const auto net = network_from_json(parse_json(read_file(net_path), "network"));
  std::vector<std::vector<double>> rows;
  if (!x.empty()) rows.push_back(parse_row(x));
  if (!points.empty()) {
    std::istringstream in(read_file(points));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.front() == '#') continue;
      rows.push_back(parse_row(line));
    }
  }
  if (rows.empty()) throw UsageError("eval: pass --x or --points");
  for (std::size_t j = 0; j < net.output_dim(); ++j) out << (j ? "," : "") << "y" << j;
  out << ",exceeds_sup_bound\n";
  for (const auto& r : rows) {
    const auto e = evaluate_flagged(net, r);
    bool flag = false;
    for (std::size_t j = 0; j < e.values.size(); ++j) {
      out << (j ? "," : "") << num(e.values[j]);
      flag = flag || e.exceeds_bound[j];
    }
    out << "," << (flag ? 1 : 0) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- experiments

struct Family {
  ScalarFn f0;
  std::size_t d = 1;
  std::optional<double> expected;
};

Family family_of(const json& cfg) {
  Family fam;
  if (cfg.contains("composition")) {
    auto spec = std::make_shared<CompositionSpec>(composition_from_json(cfg["composition"]));
    fam.f0 = [spec](std::span<const double> x) { return evaluate_composite(*spec, x); };
    fam.d = spec->input_dim;
    const auto prof = class_profile(*spec);
    fam.expected = rate_exponent(prof.beta, prof.t);
  } else {
    const auto f = holder_target(field(cfg, "target"), 1.0, 1.0);
    fam.f0 = f.value;
    fam.d = f.r;
  }
  if (cfg.contains("expected")) {
    const auto& e = cfg["expected"];
    fam.expected = rate_exponent(get<std::vector<double>>(e, "beta", "expected."),
                                 get<std::vector<double>>(e, "t", "expected."));
  }
  return fam;
}

ExperimentSetup setup_of(const json& cfg, const Family& fam, int jobs) {
  ExperimentSetup s;
  s.f0 = fam.f0;
  s.d = fam.d;
  s.design = design_from_name(get_or<std::string>(cfg, "design", "uniform"));
  s.noise_sd = get_or<double>(cfg, "noise_sd", 1.0);
  if (!(s.noise_sd >= 0.0)) throw ParseError("config field 'noise_sd': must be nonnegative");
  s.n_grid = n_grid_of(cfg);
  s.replications = get_or<int>(cfg, "replications", 1);
  if (s.replications < 1) throw ParseError("config field 'replications': must be at least 1");
  s.mc_points = get_or<std::size_t>(cfg, "mc_points", 10000);
  if (s.mc_points < 100) throw ParseError("config field 'mc_points': must be at least 100");
  s.seed = get<std::uint64_t>(cfg, "seed");
  s.jobs = jobs;
  s.expected_exponent = fam.expected;
  return s;
}

FitRecipe recipe_of(const json& cfg) {
  FitRecipe r;
  const json arch = cfg.value("architecture", json::object());
  const std::string a = "architecture.";
  r.depth = get_or<std::size_t>(arch, "depth", r.depth, a);
  r.width = get_or<std::size_t>(arch, "width", r.width, a);
  r.s_scale = get_or<double>(arch, "s_scale", r.s_scale, a);
  r.s_exponent = get_or<double>(arch, "s_exponent", r.s_exponent, a);
  r.s_log_power = get_or<double>(arch, "s_log_power", r.s_log_power, a);
  r.F = get_or<double>(arch, "F", r.F, a);
  if (r.width == 0) throw ParseError("config field 'architecture.width': must be positive");
  if (!(r.F > 0.0)) throw ParseError("config field 'architecture.F': must be positive");
  const json hyper = cfg.value("hyper", json::object());
  const std::string h = "hyper.";
  r.hyper.restarts = get_or<int>(hyper, "restarts", r.hyper.restarts, h);
  r.hyper.epochs = get_or<int>(hyper, "epochs", r.hyper.epochs, h);
  r.hyper.step = get_or<double>(hyper, "step", r.hyper.step, h);
  r.hyper.init_scale = get_or<double>(hyper, "init_scale", r.hyper.init_scale, h);
  if (r.hyper.restarts < 1) throw ParseError("config field 'hyper.restarts': must be at least 1");
  if (r.hyper.epochs < 0) throw ParseError("config field 'hyper.epochs': must be nonnegative");
  return r;
}

std::string experiment_csv(const ExperimentReport& rep, const Meta& meta) {
  std::ostringstream s;
  s << csv_preamble(meta) << "n,replication,empirical_risk,pred_risk,pred_risk_se,s_final,seed\n";
  for (const auto& r : rep.rows) {
    s << r.n << "," << r.replication << "," << num(r.empirical_risk) << "," << num(r.pred_risk) << ","
      << num(r.pred_risk_se) << "," << r.s_final << "," << r.seed << "\n";
  }
  return s.str();
}

json experiment_json(const ExperimentReport& rep, const Meta& meta, const std::string& estimator) {
  json j;
  j["meta"] = meta_json(meta);
  j["estimator"] = estimator;
  j["n_grid"] = rep.n_grid;
  json means = json::array();
  for (double v : rep.mean_risk) means.push_back(std::isfinite(v) ? json(v) : json(nullptr));
  j["mean_pred_risk"] = means;
  j["dropped_replications"] = rep.dropped;
  j["slope"] = to_json(rep.slope);
  j["expected_exponent"] = rep.expected_exponent ? json(*rep.expected_exponent) : json(nullptr);
  return j;
}

struct Loaded {
  json cfg;
  Meta meta;
  fs::path dir;
  std::string name;
};

Loaded load_config(const std::string& path, const std::string& out_flag, const std::string& default_name,
                   bool seeded) {
  if (path.empty()) throw UsageError("--config is required");
  const auto text = read_file(path);
  Loaded l;
  l.cfg = parse_json(text, "config");
  if (!l.cfg.is_object()) throw ParseError("config: top level must be an object");
  l.meta.digest = sha256_hex(text);
  l.meta.seed = seeded ? get<std::uint64_t>(l.cfg, "seed") : get_or<std::uint64_t>(l.cfg, "seed", 0);
  l.dir = output_dir(out_flag, &l.cfg);
  l.name = get_or<std::string>(l.cfg, "name", default_name);
  return l;
}

int cmd_simulate(const std::string& config, const std::string& out_flag, int jobs, std::ostream& out) {
  const auto l = load_config(config, out_flag, "simulate", true);
  const auto fam = family_of(l.cfg);
  const auto setup = setup_of(l.cfg, fam, jobs);
  const auto rep = rate_experiment(setup, network_estimator(recipe_of(l.cfg)));
  write_file(l.dir / (l.name + ".csv"), experiment_csv(rep, l.meta));
  write_file(l.dir / (l.name + ".json"), experiment_json(rep, l.meta, "sparse_relu_network").dump(2) + "\n");
  out << "slope " << num(rep.slope.slope) << " +- " << num(rep.slope.std_error)
      << (rep.slope.degenerate ? " (degenerate: " + rep.slope.reason + ")" : "") << "\n";
  out << "wrote " << (l.dir / (l.name + ".csv")).string() << "\n";
  return kExitOk;
}

int cmd_wavelet(const std::string& config, const std::string& out_flag, int jobs, std::ostream& out) {
  const auto l = load_config(config, out_flag, "wavelet", true);
  const auto& cfg = l.cfg;
  const bool has_family = cfg.contains("target") || cfg.contains("composition");
  if (!has_family && !cfg.contains("floor")) throw ParseError("config field 'target': missing");
  const json wcfg = cfg.value("wavelet", json::object());
  const auto wname = get_or<std::string>(wcfg, "name", "haar", "wavelet.");
  if (wname != "haar") throw ParseError("config field 'wavelet.name': only 'haar' is available");
  const auto spec = haar();
  if (has_family) {
    const auto fam = family_of(cfg);
    const double alpha = get_or<double>(wcfg, "alpha", 1.0, "wavelet.");
    if (!(alpha > 0.0)) throw ParseError("config field 'wavelet.alpha': must be positive");
    const auto setup = setup_of(cfg, fam, jobs);
    const auto rep = rate_experiment(setup, wavelet_estimator(spec, alpha));
    write_file(l.dir / (l.name + ".csv"), experiment_csv(rep, l.meta));
    write_file(l.dir / (l.name + ".json"), experiment_json(rep, l.meta, "haar_series").dump(2) + "\n");
    out << "slope " << num(rep.slope.slope) << " +- " << num(rep.slope.std_error) << "\n";
  }
  if (cfg.contains("floor")) {
    const auto& fl = cfg["floor"];
    const std::string p = "floor.";
    const double alpha = get<double>(fl, "alpha", p);
    const auto d = get<std::size_t>(fl, "d", p);
    if (!(alpha > 0.0) || alpha > spec.r) throw ParseError("config field 'floor.alpha': must lie in (0, r]");
    if (d == 0) throw ParseError("config field 'floor.d': must be positive");
    const auto grid = n_grid_of(fl, p);
    const int j_min = spec.q + lattice_nu(d);
    const int j_max = get_or<int>(fl, "j_max", j_min + 12, p);
    const double K = get_or<double>(fl, "K", 1.0 / std::abs(lattice_constant(spec, d)), p);
    const auto levels = family_coefficients(spec, alpha, K, d, j_min, j_max);
    std::ostringstream csv;
    csv << csv_preamble(l.meta) << "n,floor,level\n";
    std::vector<double> xs;
    std::vector<double> ys;
    for (auto n : grid) {
      const auto fp = family_floor(levels, static_cast<double>(n));
      csv << n << "," << num(fp.floor) << "," << fp.j << "\n";
      xs.push_back(static_cast<double>(n));
      ys.push_back(fp.floor);
    }
    const auto slope = log_log_slope(xs, ys, 0.0);
    write_file(l.dir / (l.name + "_floor.csv"), csv.str());
    json j{{"meta", meta_json(l.meta)}, {"alpha", alpha}, {"d", d}, {"K", K}, {"slope", to_json(slope)},
           {"expected_exponent", -2.0 * alpha / (2.0 * alpha + static_cast<double>(d))}};
    write_file(l.dir / (l.name + "_floor.json"), j.dump(2) + "\n");
    out << "floor slope " << num(slope.slope) << " (expected " << num(-2.0 * alpha / (2.0 * alpha + d)) << ")\n";
  }
  return kExitOk;
}

int cmd_rates(const std::string& config, const std::string& out_flag, std::ostream& out) {
  const auto l = load_config(config, out_flag, "rates", false);
  const auto& cfg = l.cfg;
  ClassProfile cls;
  if (cfg.contains("composition")) {
    cls = class_profile(composition_from_json(cfg["composition"]));
  } else {
    cls.beta = get<std::vector<double>>(cfg, "beta");
    cls.t = get<std::vector<double>>(cfg, "t");
    cls.K = get_or<double>(cfg, "K", 1.0);
  }
  if (cls.beta.size() != cls.t.size()) throw ParseError("config field 't': must have one entry per level of 'beta'");
  for (double b : cls.beta) {
    if (!(b > 0.0)) throw ParseError("config field 'beta': entries must be positive");
  }
  const auto grid = get<std::vector<double>>(cfg, "n_grid");
  if (grid.empty()) throw ParseError("config field 'n_grid': must not be empty");
  json rep;
  rep["meta"] = meta_json(l.meta);
  rep["beta"] = cls.beta;
  rep["t"] = cls.t;
  rep["beta_star"] = effective_smoothness(cls.beta);
  rep["rate_exponent"] = rate_exponent(cls.beta, cls.t);
  rep["exponent"] = -rate_exponent(cls.beta, cls.t);
  json phi = json::array();
  for (double n : grid) {
    const auto p = rate_phi(n, cls.beta, cls.t);
    phi.push_back({{"n", n}, {"phi_n", p.phi}, {"level", p.level}});
  }
  rep["phi"] = phi;
  if (cfg.contains("architecture")) {
    const auto& a = cfg["architecture"];
    const std::string p = "architecture.";
    Architecture arch;
    arch.L = get<std::size_t>(a, "L", p);
    if (a.contains("p")) {
      arch.p = get<std::vector<std::size_t>>(a, "p", p);
    } else {
      // Uniform hidden width shorthand.
      arch.p.assign(arch.L + 2, get<std::size_t>(a, "width", p));
      arch.p.front() = get<std::size_t>(a, "input_dim", p);
      arch.p.back() = get_or<std::size_t>(a, "output_dim", 1, p);
    }
    arch.s = get<double>(a, "s", p);
    arch.F = get<double>(a, "F", p);
    if (arch.p.size() != arch.L + 2) throw ParseError("config field 'architecture.p': needs L + 2 entries");
    ConditionBands bands;
    if (cfg.contains("bands")) {
      bands.lower = get<double>(cfg["bands"], "lower", "bands.");
      bands.upper = get<double>(cfg["bands"], "upper", "bands.");
    }
    const double c_eps = get_or<double>(cfg, "c_eps", 1.0);
    json conds = json::array();
    json bounds = json::array();
    for (double n : grid) {
      conds.push_back(to_json(check_architecture_conditions(arch, cls, n, bands)));
      bounds.push_back({{"n", n},
                        {"log_covering", entropy_bound(arch.L, arch.p, arch.s, 1.0 / n)},
                        {"log_covering_refined", entropy_bound_refined(arch.L, arch.p.front(), arch.p.back(), arch.s, 1.0 / n)},
                        {"tau", tau_bound(arch.s, arch.L, arch.p.front(), arch.p.back(), n, arch.F, c_eps)}});
    }
    rep["conditions"] = conds;
    rep["complexity"] = bounds;
  }
  write_file(l.dir / (l.name + ".json"), rep.dump(2) + "\n");
  out << "exponent " << num(rep["exponent"].get<double>()) << " (phi_n = n^-" << num(rep["exponent"].get<double>())
      << ")\nwrote " << (l.dir / (l.name + ".json")).string() << "\n";
  return kExitOk;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::ostringstream s;
  for (unsigned int i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return s.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse ReLU network constructions, certificates and rate experiments", "relunet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RELUNET_VERSION);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build a network with its certificate");
  construct->add_option("kind", ca.kind, "mult, mult_r, mon, hat, holder or composite")->required();
  construct->add_option("--m", ca.m, "resolution parameter m");
  construct->add_option("--r", ca.r, "input dimension");
  construct->add_option("--gamma", ca.gamma, "monomial degree bound");
  construct->add_option("--M", ca.M, "grid size");
  construct->add_option("--beta", ca.beta, "smoothness");
  construct->add_option("--N", ca.N, "size parameter (comma list per level for composite)");
  construct->add_option("--K", ca.K, "Hoelder radius");
  construct->add_option("--sup-norm", ca.sup_norm, "rescale the output to this sup norm");
  construct->add_option("--target", ca.target, "target file or inline JSON");
  construct->add_option("--spec", ca.spec, "composition spec file");
  construct->add_option("--name", ca.name, "output file stem");
  construct->add_option("--out", ca.out, "output directory");

  std::string net_path, cert_path, grid_arg, x_arg, points_arg, config_path, out_dir;
  int jobs = 0;
  auto* certify = app.add_subcommand("certify", "re-measure a certificate's claims");
  certify->add_option("--net", net_path, "network JSON")->required();
  certify->add_option("--cert", cert_path, "certificate JSON")->required();
  certify->add_option("--grid", grid_arg, "standard, uniform:N or halton:N");

  auto* eval = app.add_subcommand("eval", "evaluate a network");
  eval->add_option("--net", net_path, "network JSON")->required();
  eval->add_option("--x", x_arg, "comma-separated point");
  eval->add_option("--points", points_arg, "CSV file, one point per line");

  std::vector<CLI::App*> experiments;
  for (const auto& [name, help] : {std::pair{"simulate", "network rate experiment"},
                                   std::pair{"wavelet", "wavelet estimator experiment and risk floors"},
                                   std::pair{"rates", "rate and complexity calculators"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config")->required();
    sub->add_option("--out", out_dir, "output directory");
    if (std::string(name) != "rates") sub->add_option("--jobs", jobs, "worker threads")->check(CLI::NonNegativeNumber);
    experiments.push_back(sub);
  }

  std::vector<std::string> argv_store{"relunet"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (construct->parsed()) return cmd_construct(ca, args, out, err);
    if (certify->parsed()) return cmd_certify(net_path, cert_path, grid_arg, out, err);
    if (eval->parsed()) return cmd_eval(net_path, x_arg, points_arg, out);
    if (experiments[0]->parsed()) return cmd_simulate(config_path, out_dir, jobs, out);
    if (experiments[1]->parsed()) return cmd_wavelet(config_path, out_dir, jobs, out);
    if (experiments[2]->parsed()) return cmd_rates(config_path, out_dir, out);
  } catch (const DomainError& e) {
    err << e.what() << "\n";
    return kExitRefused;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "invalid number: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace relunet
