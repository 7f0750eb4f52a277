#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lagpsd/appendix.hpp"
#include "lagpsd/cases.hpp"
#include "lagpsd/error.hpp"
#include "lagpsd/models.hpp"
#include "table.hpp"

using namespace lagpsd;
using namespace lagpsd::cli;
using json = nlohmann::ordered_json;

namespace {

constexpr int kOk = 0, kConfig = 2, kNumeric = 3, kPartial = 4;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Opts {
  std::string family;  // empty: per-command default
  int n = 0;
  std::vector<int> ns;
  double rho1 = NAN, rho = NAN;
  std::string case_id, quad = "gauss";
  std::string suite, model, param, range, curve;
  double m_step = 0.5;
  double mu = NAN, mu_im = 0.0;
  double p_norm = INFINITY, delta = 0.0;
  long long seed = 1;
  int count = 200, steps = 40;
  std::map<std::string, double> params;
  std::string output, format = "csv";
  bool verify = false;
  double verify_tol = 1e-3;
};

int workers() {
  const char* e = std::getenv("LAGPSD_WORKERS");
  if (!e) return 1;
  int w = std::atoi(e);
  return std::clamp(w, 1, 64);
}

// Runs f(i) for i < count on a bounded pool, results kept in index order.
template <class R, class F>
std::vector<R> run_pool(std::size_t count, F f) {
  std::vector<R> out(count);
  const std::size_t w = static_cast<std::size_t>(workers());
  for (std::size_t start = 0; start < count; start += w) {
    std::vector<std::future<R>> fs;
    for (std::size_t i = start; i < std::min(count, start + w); ++i)
      fs.push_back(std::async(w > 1 ? std::launch::async : std::launch::deferred, f, i));
    for (std::size_t i = 0; i < fs.size(); ++i) out[start + i] = fs[i].get();
  }
  return out;
}

NodeFamily parse_family(const std::string& s) {
  try {
    return family_from_string(s);
  } catch (const std::exception&) {
    throw ConfigError("unknown family '" + s + "'");
  }
}

std::pair<double, double> parse_range(const std::string& s, const char* what) {
  auto c = s.find(':');
  if (c == std::string::npos) throw ConfigError(std::string(what) + " must look like lo:hi");
  try {
    return {std::stod(s.substr(0, c)), std::stod(s.substr(c + 1))};
  } catch (const std::exception&) {
    throw ConfigError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

void emit(const Opts& o, const Table& t, const json& cfg, const std::string& suffix = "") {
  auto write = [&](std::ostream& os) {
    if (o.format == "json")
      write_json(os, t, cfg);
    else
      write_csv(os, t, cfg);
  };
  if (o.output.empty() || o.output == "-") {
    write(std::cout);
    return;
  }
  std::string path = o.output + suffix;
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  write(f);
}

// ---------------- nodes ----------------

int cmd_nodes(const Opts& o, const json& cfg) {
  NodeFamily f = parse_family(o.family);
  if (o.n < 1 || o.n > kMaxNodes) throw ConfigError("--n must be in [1, 200]");
  const double rho1 = std::isnan(o.rho1) ? 1.0 : o.rho1;
  if (!(rho1 > 0)) throw ConfigError("--rho1 must be positive");
  HalfLineQuadrature q = half_line_quadrature(f, o.n, rho1);
  Table t;
  t.columns = {"family", "N", "rho1", "j", "t", "weight", "scaled_weight", "theta", "halfline_node", "halfline_weight"};
  for (std::size_t j = 0; j < q.rule.nodes.size(); ++j) {
    double tj = q.rule.nodes[j];
    t.add({std::string(to_string(f)), static_cast<long long>(o.n), rho1, static_cast<long long>(j), tj,
           q.rule.weights[j], q.rule.scaled_weights[j], tj == 0.0 ? 0.0 : -q.nodes[j], q.nodes[j],
           q.weights[j]});
  }
  emit(o, t, cfg);
  return kOk;
}

// ---------------- converge ----------------

int cmd_converge(const Opts& o, const json& cfg) {
  LinearCase c;
  try {
    c = linear_case(o.case_id);
  } catch (const NumericError& e) {
    if (e.kind() == ErrorKind::InvalidParameter) throw ConfigError(e.what());
    throw;
  }
  NodeFamily f = parse_family(o.family);
  QuadMode mode;
  try {
    mode = quad_mode_from_string(o.quad);
  } catch (const std::exception&) {
    throw ConfigError("unknown quadrature mode '" + o.quad + "'");
  }
  if (o.ns.empty()) throw ConfigError("--n needs at least one value");
  for (std::size_t i = 0; i < o.ns.size(); ++i) {
    if (o.ns[i] < 1 || o.ns[i] > kMaxNodes) throw ConfigError("N values must be in [1, 200]");
    if (i && o.ns[i] <= o.ns[i - 1]) throw ConfigError("N list must be ascending");
  }
  const double rho1 = std::isnan(o.rho1) ? c.mu / 2 : o.rho1;
  const double rho = std::isnan(o.rho) ? rho1 : o.rho;
  if (!(rho1 > 0) || !(rho >= rho1)) throw ConfigError("need 0 < rho1 <= rho");

  auto per_n = run_pool<std::vector<ConvergenceRecord>>(o.ns.size(), [&](std::size_t i) {
    return convergence_study(c, f, rho1, rho, {o.ns[i]}, mode);
  });
  Table t;
  t.columns = {"case", "family", "rho1", "rho", "quad_mode", "N", "abs_error", "eigfun_error",
               "matched_lambda_re", "matched_lambda_im", "exact_re", "exact_im", "bound_dn", "error"};
  std::size_t ok = 0, bad = 0;
  for (const auto& rs : per_n)
    for (const ConvergenceRecord& r : rs) {
      (r.error.empty() ? ok : bad)++;
      t.add({r.case_id, std::string(to_string(r.family)), r.rho1, r.rho,
             std::string(to_string(r.quad_mode)), static_cast<long long>(r.n), r.abs_error,
             r.eigfun_error, r.matched.real(), r.matched.imag(), r.exact.real(), r.exact.imag(),
             r.bound_dn, r.error});
    }
  emit(o, t, cfg);
  return ok > 0 ? kOk : kNumeric;
}

// ---------------- oracle ----------------

int cmd_oracle(const Opts& o, const json& cfg) {
  Table t;
  int code = kOk;
  std::vector<NodeFamily> fams;
  if (o.family == "both")
    fams = {NodeFamily::LaguerreZeros, NodeFamily::LaguerreExtrema};
  else
    fams = {parse_family(o.family)};

  if (o.suite == "reduced-spectrum") {
    std::vector<int> ns = o.ns.empty() ? std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} : o.ns;
    for (int n : ns)
      if (n < 1 || n > 40) throw ConfigError("reduced-spectrum needs N in [1, 40]");
    t.columns = {"family", "N", "max_set_distance", "max_re_offset", "trace", "det",
                 "max_charpoly_rel_error"};
    for (NodeFamily f : fams) {
      auto rs = run_pool<ReducedDiffSpectrum>(ns.size(), [&](std::size_t i) {
        return reduced_diffmat_spectrum(ns[i], f);
      });
      for (const auto& r : rs)
        t.add({std::string(to_string(f)), static_cast<long long>(r.n), r.max_set_distance,
               r.max_re_offset, r.trace, r.det, r.max_sample_rel_error});
    }
  } else if (o.suite == "bounds") {
    const cplx mu(std::isnan(o.mu) ? -1.0 : o.mu, o.mu_im);
    if (!(mu.real() < 0.5)) throw ConfigError("bounds need Re mu < 1/2");
    if (!std::isinf(o.p_norm) && !(o.delta > 0)) throw ConfigError("finite p needs --delta > 0");
    std::vector<int> ns = o.ns;
    if (ns.empty())
      for (int n = 2; n <= 30; ++n) ns.push_back(n);
    t.columns = {"family", "mu_re", "mu_im", "N", "measured", "accuracy", "bound", "ratio"};
    for (NodeFamily f : fams) {
      auto rs = run_pool<std::pair<MeasuredError, double>>(ns.size(), [&](std::size_t i) {
        CollocationSolution s = colloc_recurrence(mu, 1.0, 0.0, ns[i], f);
        return std::make_pair(measured_error(s, o.p_norm, o.delta),
                              error_bound(mu, 1.0, 0.0, ns[i], f, o.p_norm, o.delta));
      });
      for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto& [m, b] = rs[i];
        t.add({std::string(to_string(f)), mu.real(), mu.imag(), static_cast<long long>(ns[i]),
               m.value, m.accuracy, b, b > 0 ? m.value / b : NAN});
        if (m.value > b) code = kPartial;
      }
    }
  } else if (o.suite == "equivalence") {
    if (o.count < 1) throw ConfigError("--count must be positive");
    std::mt19937_64 rng(static_cast<std::uint64_t>(o.seed));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    struct Trial {
      cplx mu, beta, c;
      int n;
      NodeFamily f;
    };
    std::vector<Trial> trials;
    for (int i = 0; i < o.count; ++i) {
      Trial tr;
      tr.mu = cplx(-3.0 + 1.7 * (u(rng) + 1.0), 3.0 * u(rng));
      tr.beta = cplx(u(rng), u(rng));
      tr.c = cplx(u(rng), u(rng));
      tr.n = 1 + static_cast<int>((u(rng) + 1.0) * 7.5) % 15;
      tr.f = fams.size() == 2 ? fams[static_cast<std::size_t>(i) % 2] : fams[0];
      trials.push_back(tr);
    }
    t.columns = {"trial", "family", "N", "mu_re", "mu_im", "rel_diff", "rel_diff_double", "condition"};
    auto rs = run_pool<std::vector<double>>(trials.size(), [&](std::size_t i) {
      const Trial& tr = trials[i];
      CollocationSolution s = colloc_recurrence(tr.mu, tr.beta, tr.c, tr.n, tr.f);
      DirectSolution d = colloc_direct(tr.mu, tr.beta, tr.c, tr.n, tr.f, Precision::Extended);
      DirectSolution dd = colloc_direct(tr.mu, tr.beta, tr.c, tr.n, tr.f, Precision::Double);
      double sc = 0.0, e = 0.0, ed = 0.0;
      for (cplx v : s.values) sc = std::max(sc, std::abs(v));
      for (std::size_t j = 0; j < s.values.size(); ++j) {
        e = std::max(e, std::abs(s.values[j] - d.values[j]));
        ed = std::max(ed, std::abs(s.values[j] - dd.values[j]));
      }
      return std::vector<double>{e / sc, ed / sc, dd.condition};
    });
    for (std::size_t i = 0; i < trials.size(); ++i)
      t.add({static_cast<long long>(i), std::string(to_string(trials[i].f)),
             static_cast<long long>(trials[i].n), trials[i].mu.real(), trials[i].mu.imag(), rs[i][0],
             rs[i][1], rs[i][2]});
  } else {
    throw ConfigError("--suite must be reduced-spectrum, bounds or equivalence");
  }
  emit(o, t, cfg);
  return code;
}

// ---------------- bifurcate ----------------

const std::set<std::string> kBlowfliesKeys = {"beta0", "mu", "rho_factor", "quad_rho_factor"};
const std::set<std::string> kBerettaKeys = {"delta_A", "delta_J", "a", "b", "m", "tau", "rho_fraction"};

BerettaBredaParams bb_params(const std::map<std::string, double>& p) {
  BerettaBredaParams b;
  auto get = [&](const char* k, double& v) {
    if (auto it = p.find(k); it != p.end()) v = it->second;
  };
  get("delta_A", b.delta_A);
  get("delta_J", b.delta_J);
  get("a", b.a);
  get("b", b.b);
  get("m", b.m);
  get("tau", b.tau);
  get("rho_fraction", b.rho_fraction);
  return b;
}

BlowfliesParams bf_params(const std::map<std::string, double>& p) {
  BlowfliesParams b;
  auto get = [&](const char* k, double& v) {
    if (auto it = p.find(k); it != p.end()) v = it->second;
  };
  get("beta0", b.beta0);
  get("mu", b.mu);
  get("rho_factor", b.rho_factor);
  get("quad_rho_factor", b.quad_rho_factor);
  return b;
}

Table branch_table(const ContinuationResult& r) {
  Table t;
  t.columns = {"param", "state_head", "rightmost_re", "rightmost_im", "stability"};
  for (const BranchRow& b : r.branch)
    t.add({b.param, b.head, b.rightmost.real(), b.rightmost.imag(),
           std::string(b.stable ? "stable" : "unstable")});
  return t;
}

Table points_table(const ContinuationResult& r) {
  Table t;
  t.columns = {"kind", "param", "lambda_re", "lambda_im", "residual"};
  for (const BifurcationPoint& p : r.points)
    t.add({std::string(to_string(p.kind)), p.param, p.lambda.real(), p.lambda.imag(), p.residual});
  return t;
}

int cmd_bifurcate(const Opts& o, const json& cfg) {
  NodeFamily f = parse_family(o.family);
  const int n = o.ns.empty() ? 20 : o.ns.front();
  if (n < 1 || n > kMaxNodes) throw ConfigError("N must be in [1, 200]");
  if (o.steps < 2) throw ConfigError("--steps must be at least 2");
  const auto& keys = o.model == "blowflies" ? kBlowfliesKeys : kBerettaKeys;
  for (const auto& [k, v] : o.params)
    if (!keys.count(k)) throw ConfigError("parameter '" + k + "' does not belong to " + o.model);

  if (o.model == "blowflies") {
    BlowfliesParams base = bf_params(o.params);
    const std::string param = o.param.empty() ? "beta0" : o.param;
    if (param != "beta0") throw ConfigError("blowflies continues in beta0 only");
    const double thr = base.mu * std::exp(base.mu);
    auto [lo, hi] = o.range.empty() ? std::make_pair(0.5 * thr, 15.0 * thr) : parse_range(o.range, "--range");
    ModelFactory fac = [base](double b0) {
      BlowfliesParams q = base;
      q.beta0 = b0;
      return model_blowflies(q);
    };
    ContinuationOptions co;
    co.lo = lo;
    co.hi = hi;
    co.steps = o.steps;
    co.n = n;
    co.family = f;
    const double mu = base.mu;
    co.head_guess = [mu](double b0) { return blowflies_equilibrium(b0, mu); };
    ContinuationResult r = continue_equilibrium(fac, co);
    emit(o, branch_table(r), cfg, ".branch.csv");
    emit(o, points_table(r), cfg, ".bifurcations.csv");
    int code = kOk;
    if (o.verify) {
      co.n = n + 10;
      ContinuationResult r2 = continue_equilibrium(fac, co);
      code = r2.points.size() == r.points.size() ? kOk : kPartial;
      for (std::size_t i = 0; code == kOk && i < r.points.size(); ++i)
        if (std::abs(r.points[i].param - r2.points[i].param) > o.verify_tol) code = kPartial;
      std::cerr << "verification at N=" << n + 10 << ": " << (code == kOk ? "consistent" : "inconsistent") << '\n';
    }
    return code;
  }
  if (o.model != "beretta-breda") throw ConfigError("--model must be blowflies or beretta-breda");
  BerettaBredaParams base = bb_params(o.params);
  if (!o.curve.empty()) {
    std::string spec = o.curve;
    if (spec.rfind("m=", 0) == 0) spec = spec.substr(2);
    auto [mlo, mhi] = parse_range(spec, "--curve");
    if (!(o.m_step > 0) || mhi < mlo) throw ConfigError("bad --curve/--m-step");
    if (mlo < 5 || mhi > 10) throw ConfigError("--curve must lie within m in [5, 10]");
    std::vector<double> ms;
    for (int i = 0; mlo + i * o.m_step <= mhi + 1e-12; ++i) ms.push_back(mlo + i * o.m_step);
    auto [tlo, thi] = o.range.empty() ? std::make_pair(0.3, 6.0) : parse_range(o.range, "--range");
    auto rows = hopf_curve_2param(base, ms, tlo, thi, o.steps, n, f, workers());
    Table t;
    t.columns = {"m", "branch", "tau", "N", "error"};
    int code = kOk;
    for (const HopfCurveRow& r : rows) {
      for (std::size_t i = 0; i < r.taus.size(); ++i)
        t.add({r.m, static_cast<long long>(i), r.taus[i], static_cast<long long>(n), r.error});
      if (!r.error.empty()) {
        code = kPartial;
        if (r.taus.empty()) t.add({r.m, -1LL, NAN, static_cast<long long>(n), r.error});
      }
    }
    emit(o, t, cfg);
    return code;
  }
  const std::string param = o.param.empty() ? "tau" : o.param;
  if (param != "tau") throw ConfigError("beretta-breda continues in tau only");
  auto [lo, hi] = o.range.empty() ? std::make_pair(0.3, 6.0) : parse_range(o.range, "--range");
  ModelFactory fac = [base](double tau) {
    BerettaBredaParams q = base;
    q.tau = tau;
    return model_beretta_breda(q);
  };
  ContinuationOptions co;
  co.lo = lo;
  co.hi = hi;
  co.steps = o.steps;
  co.n = n;
  co.family = f;
  co.head_guess = [base](double tau) {
    BerettaBredaParams q = base;
    q.tau = tau;
    return beretta_breda_equilibrium(q);
  };
  ContinuationResult r = continue_equilibrium(fac, co);
  emit(o, branch_table(r), cfg, ".branch.csv");
  emit(o, points_table(r), cfg, ".bifurcations.csv");
  return kOk;
}

// ---------------- config plumbing ----------------

const std::set<std::string> kKnownKeys = {
    "command", "case", "model", "family", "rho1", "rho", "N", "quad", "params", "output",
    "format", "seed", "suite", "mu", "mu_im", "count", "param", "range", "steps", "curve",
    "m_step", "p_norm", "delta", "verify", "verify_tol"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"nodes", {"family", "N", "rho1", "output", "format"}},
    {"converge", {"case", "family", "rho1", "rho", "N", "quad", "output", "format"}},
    {"oracle", {"suite", "family", "N", "mu", "mu_im", "seed", "count", "p_norm", "delta", "output", "format"}},
    {"bifurcate", {"model", "family", "N", "params", "param", "range", "steps", "curve", "m_step",
                   "verify", "verify_tol", "output", "format"}}};

double num(const json& v, const std::string& k) {
  if (!v.is_number()) throw ConfigError("config key '" + k + "' must be a number");
  return v.get<double>();
}

std::string str(const json& v, const std::string& k) {
  if (!v.is_string()) throw ConfigError("config key '" + k + "' must be a string");
  return v.get<std::string>();
}

// Fill options not given on the command line from the config file.
void apply_config(const json& j, const std::string& cmd, CLI::App* sub, Opts& o) {
  const auto& allowed = kCommandKeys.at(cmd);
  auto unset = [&](const char* flag) { return sub->get_option(flag)->count() == 0; };
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    if (!kKnownKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
    if (k == "command") continue;
    if (!allowed.count(k)) throw ConfigError("config key '" + k + "' is not used by " + cmd);
    if (k == "family" && unset("--family")) o.family = str(v, k);
    else if (k == "case" && unset("--case")) o.case_id = str(v, k);
    else if (k == "model" && unset("--model")) o.model = str(v, k);
    else if (k == "quad" && unset("--quad")) o.quad = str(v, k);
    else if (k == "suite" && unset("--suite")) o.suite = str(v, k);
    else if (k == "param" && unset("--param")) o.param = str(v, k);
    else if (k == "range" && unset("--range")) o.range = str(v, k);
    else if (k == "curve" && unset("--curve")) o.curve = str(v, k);
    else if (k == "output" && unset("--output")) o.output = str(v, k);
    else if (k == "format" && unset("--format")) o.format = str(v, k);
    else if (k == "rho1" && unset("--rho1")) o.rho1 = num(v, k);
    else if (k == "rho" && unset("--rho")) o.rho = num(v, k);
    else if (k == "mu" && unset("--mu")) o.mu = num(v, k);
    else if (k == "mu_im" && unset("--mu-im")) o.mu_im = num(v, k);
    else if (k == "m_step" && unset("--m-step")) o.m_step = num(v, k);
    else if (k == "delta" && unset("--delta")) o.delta = num(v, k);
    else if (k == "verify_tol" && unset("--verify-tol")) o.verify_tol = num(v, k);
    else if (k == "p_norm" && unset("--p")) o.p_norm = v.is_string() && v == "inf" ? INFINITY : num(v, k);
    else if (k == "seed" && unset("--seed")) o.seed = static_cast<long long>(num(v, k));
    else if (k == "count" && unset("--count")) o.count = static_cast<int>(num(v, k));
    else if (k == "steps" && unset("--steps")) o.steps = static_cast<int>(num(v, k));
    else if (k == "verify" && unset("--verify")) {
      if (!v.is_boolean()) throw ConfigError("config key 'verify' must be a boolean");
      o.verify = v.get<bool>();
    } else if (k == "N" && unset("--n")) {
      std::vector<int> ns;
      if (v.is_number_integer()) ns.push_back(v.get<int>());
      else if (v.is_array())
        for (const json& e : v) {
          if (!e.is_number_integer()) throw ConfigError("config key 'N' must hold integers");
          ns.push_back(e.get<int>());
        }
      else throw ConfigError("config key 'N' must be an integer or a list");
      o.ns = ns;
    } else if (k == "params") {
      if (!v.is_object()) throw ConfigError("config key 'params' must be an object");
      for (auto p = v.begin(); p != v.end(); ++p)
        if (!o.params.count(p.key())) o.params[p.key()] = num(p.value(), "params." + p.key());
    }
  }
}

json resolved(const std::string& cmd, const Opts& o) {
  json j;
  j["command"] = cmd;
  auto put_num = [&](const char* k, double v) {
    if (std::isfinite(v)) j[k] = v;
    else if (!std::isnan(v)) j[k] = fmt(v);
  };
  if (cmd == "nodes") {
    j["family"] = o.family;
    j["N"] = o.n;
    put_num("rho1", std::isnan(o.rho1) ? 1.0 : o.rho1);
  } else if (cmd == "converge") {
    j["case"] = o.case_id;
    j["family"] = o.family;
    put_num("rho1", o.rho1);
    put_num("rho", o.rho);
    j["N"] = o.ns;
    j["quad"] = o.quad;
  } else if (cmd == "oracle") {
    j["suite"] = o.suite;
    j["family"] = o.family;
    j["N"] = o.ns;
    put_num("mu", o.mu);
    put_num("mu_im", o.mu_im);
    j["seed"] = o.seed;
    j["count"] = o.count;
    put_num("p_norm", o.p_norm);
    put_num("delta", o.delta);
  } else {
    j["model"] = o.model;
    j["family"] = o.family;
    j["N"] = o.ns;
    json p = json::object();
    for (const auto& [k, v] : o.params) p[k] = v;
    j["params"] = p;
    j["param"] = o.param;
    j["range"] = o.range;
    j["steps"] = o.steps;
    j["curve"] = o.curve;
    j["m_step"] = o.m_step;
  }
  j["format"] = o.format;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laguerre pseudospectral stability tools"};
  app.name("lagpsd");
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");
  Opts o;

  auto common_out = [&](CLI::App* s) {
    s->add_option("--output,-o", o.output, "output file (default stdout)");
    s->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* nodes = app.add_subcommand("nodes", "Laguerre nodes and weights");
  nodes->add_option("--family", o.family, "zeros or extrema");
  nodes->add_option("--n", o.n, "number of nodes");
  nodes->add_option("--rho1", o.rho1, "node scaling");
  common_out(nodes);

  CLI::App* conv = app.add_subcommand("converge", "eigenvalue convergence for a test case");
  conv->add_option("--case", o.case_id, "a1 a2 b c d e f g");
  conv->add_option("--family", o.family, "zeros or extrema");
  conv->add_option("--rho1", o.rho1, "node scaling (default mu/2)");
  conv->add_option("--rho", o.rho, "weight rate (default rho1)");
  conv->add_option("--n", o.ns, "comma separated N values")->delimiter(',');
  conv->add_option("--quad", o.quad, "gauss or adaptive");
  common_out(conv);

  CLI::App* orc = app.add_subcommand("oracle", "half-line collocation checks");
  orc->add_option("--suite", o.suite, "reduced-spectrum, bounds or equivalence");
  orc->add_option("--family", o.family, "zeros, extrema or both");
  orc->add_option("--n", o.ns, "comma separated N values")->delimiter(',');
  orc->add_option("--mu", o.mu, "real part of mu");
  orc->add_option("--mu-im", o.mu_im, "imaginary part of mu");
  orc->add_option("--seed", o.seed, "random seed");
  orc->add_option("--count", o.count, "random trials");
  orc->add_option("--p", o.p_norm, "norm exponent (default inf)");
  orc->add_option("--delta", o.delta, "extra weight decay");
  common_out(orc);

  CLI::App* bif = app.add_subcommand("bifurcate", "equilibrium continuation");
  bif->add_option("--model", o.model, "blowflies or beretta-breda");
  bif->add_option("--family", o.family, "zeros or extrema (default extrema)");
  bif->add_option("--n", o.ns, "discretization index")->delimiter(',');
  bif->add_option("--param", o.param, "free parameter");
  bif->add_option("--range", o.range, "lo:hi");
  bif->add_option("--steps", o.steps, "continuation steps");
  bif->add_option("--curve", o.curve, "m=lo:hi, Hopf curve in (tau, m)");
  bif->add_option("--m-step", o.m_step, "grid step in m");
  bif->add_flag("--verify", o.verify, "repeat at N+10 and compare");
  bif->add_option("--verify-tol", o.verify_tol, "tolerance for --verify");
  for (const char* k : {"beta0", "mu", "rho_factor", "quad_rho_factor", "delta_A", "delta_J", "a",
                        "b", "m", "tau", "rho_fraction"}) {
    std::string flag = std::string("--") + k;
    std::replace(flag.begin() + 2, flag.end(), '_', '-');
    bif->add_option_function<double>(flag, [&o, key = std::string(k)](double v) { o.params[key] = v; },
                                      std::string("model parameter ") + k);
  }
  common_out(bif);

  // a config file may name the command
  std::vector<std::string> args(argv + 1, argv + argc);
  json cfg_file;
  try {
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
      else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config '" + config_path + "'");
      try {
        cfg_file = json::parse(f);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      if (!cfg_file.is_object()) throw ConfigError("config must be a JSON object");
      bool has_cmd = std::any_of(args.begin(), args.end(), [](const std::string& a) {
        return a == "nodes" || a == "converge" || a == "oracle" || a == "bifurcate";
      });
      if (!has_cmd) {
        if (!cfg_file.contains("command") || !cfg_file["command"].is_string())
          throw ConfigError("no command given");
        args.push_back(cfg_file["command"].get<std::string>());
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  CLI::App* sub = nullptr;
  std::string cmd;
  for (auto [name, s] : {std::pair{"nodes", nodes}, {"converge", conv}, {"oracle", orc}, {"bifurcate", bif}})
    if (s->parsed()) {
      sub = s;
      cmd = name;
    }
  if (!sub) {
    std::cerr << app.help();
    return kConfig;
  }
  try {
    if (!cfg_file.is_null()) {
      if (cfg_file.contains("command") && cfg_file["command"] != cmd)
        throw ConfigError("config command does not match '" + cmd + "'");
      apply_config(cfg_file, cmd, sub, o);
    }
    if (cmd == "nodes" && o.n == 0 && !o.ns.empty()) o.n = o.ns.front();
    if (o.family.empty()) o.family = cmd == "bifurcate" ? "extrema" : "zeros";
    if (cmd == "converge" && std::isnan(o.rho1)) {
      try {
        o.rho1 = linear_case(o.case_id).mu / 2;
      } catch (const NumericError&) {
      }
    }
    if (cmd == "converge" && std::isnan(o.rho)) o.rho = o.rho1;
    json cfg = resolved(cmd, o);
    if (cmd == "nodes") return cmd_nodes(o, cfg);
    if (cmd == "converge") return cmd_converge(o, cfg);
    if (cmd == "oracle") return cmd_oracle(o, cfg);
    return cmd_bifurcate(o, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidParameter ? kConfig : kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
