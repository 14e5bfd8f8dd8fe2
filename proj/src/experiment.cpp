#include "opuc/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "opuc/cmv.hpp"
#include "opuc/outer.hpp"
#include "opuc/sumrules.hpp"
#include "opuc/variational.hpp"

namespace opuc {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& origin, const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::configuration, fmt::format("{}: {}: {}", origin, path, msg));
}

struct Reader {
  std::string origin;

  void only(const json& j, const std::string& path, std::initializer_list<const char*> keys) const {
    if (!j.is_object()) config_error(origin, path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) config_error(origin, path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) config_error(origin, path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) config_error(origin, path, "not finite");
    return v;
  }

  long long integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer() && !j.is_number_unsigned()) config_error(origin, path, "expected an integer");
    return j.get<long long>();
  }

  cplx complex(const json& j, const std::string& path) const {
    if (j.is_number()) return {number(j, path), 0.0};
    if (!j.is_array() || j.size() != 2) config_error(origin, path, "expected a number or a [re, im] pair");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  }

  const json& array(const json& j, const std::string& path) const {
    if (!j.is_array()) config_error(origin, path, "expected an array");
    return j;
  }
};

std::string idx(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

DensityKind parse_kind(const Reader& r, const json& j) {
  if (!j.is_string()) config_error(r.origin, "density.kind", "expected a string");
  const std::string s = j.get<std::string>();
  if (s == "lebesgue") return DensityKind::lebesgue;
  if (s == "bernstein_szego") return DensityKind::bernstein_szego;
  if (s == "ps_family") return DensityKind::ps_family;
  if (s == "table") return DensityKind::table;
  config_error(r.origin, "density.kind", fmt::format("unknown kind '{}'", s));
}

bool is_pow2(long long M) { return M >= 4 && (M & (M - 1)) == 0; }

}  // namespace

ExperimentConfig parse_spec(std::string_view text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::configuration, fmt::format("{}: not valid JSON: {}", origin, e.what()));
  }
  const Reader r{origin};
  r.only(root, "", {"weight", "density", "atoms", "grid", "experiment"});
  ExperimentConfig cfg;
  MeasureSpec& m = cfg.measure;

  if (root.contains("weight")) {
    const json& w = root["weight"];
    r.only(w, "weight", {"zeros", "scale"});
    if (w.contains("scale")) {
      m.scale = r.number(w["scale"], "weight.scale");
      if (!(m.scale > 0.0)) config_error(origin, "weight.scale", "must be positive");
    }
    if (w.contains("zeros")) {
      const json& zs = r.array(w["zeros"], "weight.zeros");
      for (std::size_t i = 0; i < zs.size(); ++i) {
        const std::string p = idx("weight.zeros", i);
        r.only(zs[i], p, {"zeta_angle", "zeta", "kappa"});
        WeightZero z;
        if (zs[i].contains("zeta_angle") == zs[i].contains("zeta"))
          config_error(origin, p, "give exactly one of zeta_angle, zeta");
        if (zs[i].contains("zeta_angle")) {
          z.zeta = std::polar(1.0, r.number(zs[i]["zeta_angle"], p + ".zeta_angle"));
        } else {
          z.zeta = r.complex(zs[i]["zeta"], p + ".zeta");
          if (std::abs(std::abs(z.zeta) - 1.0) > 1e-12)
            config_error(origin, p + ".zeta", fmt::format("|zeta| = {:.17g} is not on the unit circle", std::abs(z.zeta)));
        }
        if (zs[i].contains("kappa")) {
          const long long k = r.integer(zs[i]["kappa"], p + ".kappa");
          if (k < 1 || k > 8) config_error(origin, p + ".kappa", "must be in 1..8");
          z.kappa = static_cast<int>(k);
        }
        m.zeros.push_back(z);
      }
    }
  } else {
    m.zeros.push_back({cplx{1.0, 0.0}, 1});
  }

  if (root.contains("grid")) {
    const json& g = root["grid"];
    r.only(g, "grid", {"M", "offset"});
    if (g.contains("M")) {
      const long long M = r.integer(g["M"], "grid.M");
      if (!is_pow2(M) || M > (1 << 22)) config_error(origin, "grid.M", "must be a power of two in [4, 2^22]");
      m.M = static_cast<std::size_t>(M);
    }
    if (g.contains("offset")) {
      m.offset = r.number(g["offset"], "grid.offset");
      if (!(m.offset >= 0.0 && m.offset < 1.0)) config_error(origin, "grid.offset", "must be in [0, 1)");
    }
  }

  if (root.contains("density")) {
    const json& d = root["density"];
    r.only(d, "density", {"kind", "alpha", "beta", "values"});
    if (!d.contains("kind")) config_error(origin, "density.kind", "missing");
    m.kind = parse_kind(r, d["kind"]);
    auto forbid = [&](const char* key) {
      if (d.contains(key)) config_error(origin, std::string("density.") + key, "not used by this kind");
    };
    switch (m.kind) {
      case DensityKind::lebesgue:
        forbid("alpha");
        forbid("beta");
        forbid("values");
        break;
      case DensityKind::bernstein_szego: {
        forbid("beta");
        forbid("values");
        if (!d.contains("alpha")) config_error(origin, "density.alpha", "missing");
        const json& a = r.array(d["alpha"], "density.alpha");
        for (std::size_t i = 0; i < a.size(); ++i) {
          const cplx v = r.complex(a[i], idx("density.alpha", i));
          if (!(std::abs(v) < 1.0)) config_error(origin, idx("density.alpha", i), "|alpha| must be below 1");
          m.alpha.push_back(v);
        }
        break;
      }
      case DensityKind::ps_family: {
        forbid("alpha");
        forbid("values");
        if (!d.contains("beta")) config_error(origin, "density.beta", "missing");
        if (d["beta"].is_array()) {
          for (std::size_t i = 0; i < d["beta"].size(); ++i) m.betas.push_back(r.number(d["beta"][i], idx("density.beta", i)));
        } else {
          m.betas.assign(m.zeros.size(), r.number(d["beta"], "density.beta"));
        }
        if (m.betas.size() != m.zeros.size())
          config_error(origin, "density.beta", fmt::format("{} exponents for {} zeros", m.betas.size(), m.zeros.size()));
        for (std::size_t i = 0; i < m.betas.size(); ++i)
          if (!(m.betas[i] > 0.0)) config_error(origin, idx("density.beta", i), "must be positive");
        if (m.zeros.empty()) config_error(origin, "weight.zeros", "ps_family needs at least one zero");
        break;
      }
      case DensityKind::table: {
        forbid("alpha");
        forbid("beta");
        if (!d.contains("values")) config_error(origin, "density.values", "missing");
        const json& v = r.array(d["values"], "density.values");
        for (std::size_t i = 0; i < v.size(); ++i) {
          const double x = r.number(v[i], idx("density.values", i));
          if (x < 0.0) config_error(origin, idx("density.values", i), "negative density");
          m.values.push_back(x);
        }
        if (m.values.size() != m.M)
          config_error(origin, "density.values", fmt::format("{} values for grid.M = {}", m.values.size(), m.M));
        break;
      }
    }
  }

  if (root.contains("atoms")) {
    const json& a = r.array(root["atoms"], "atoms");
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = idx("atoms", i);
      r.only(a[i], p, {"angle", "mass"});
      if (!a[i].contains("angle") || !a[i].contains("mass")) config_error(origin, p, "needs angle and mass");
      Atom at{r.number(a[i]["angle"], p + ".angle"), r.number(a[i]["mass"], p + ".mass")};
      if (!(at.mass > 0.0)) config_error(origin, p + ".mass", "must be positive");
      total += at.mass;
      m.atoms.push_back(at);
    }
    if (total > 1.0) config_error(origin, "atoms", fmt::format("masses sum to {:.17g} > 1", total));
  }

  if (root.contains("experiment")) {
    const json& e = root["experiment"];
    r.only(e, "experiment", {"tasks", "n_max", "probes", "seed", "eps", "arcs", "shift", "candidates", "workers"});
    if (e.contains("tasks")) {
      const json& t = r.array(e["tasks"], "experiment.tasks");
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!t[i].is_string()) config_error(origin, idx("experiment.tasks", i), "expected a string");
        cfg.tasks.push_back(t[i].get<std::string>());
      }
    }
    if (e.contains("n_max")) cfg.n_max = static_cast<int>(r.integer(e["n_max"], "experiment.n_max"));
    if (e.contains("probes")) {
      const json& p = r.array(e["probes"], "experiment.probes");
      for (std::size_t i = 0; i < p.size(); ++i) cfg.probes.push_back(r.complex(p[i], idx("experiment.probes", i)));
    }
    if (e.contains("seed")) {
      const long long s = r.integer(e["seed"], "experiment.seed");
      if (s < 0) config_error(origin, "experiment.seed", "must be nonnegative");
      cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (e.contains("eps")) cfg.eps = r.number(e["eps"], "experiment.eps");
    if (e.contains("arcs")) {
      const json& a = r.array(e["arcs"], "experiment.arcs");
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::string p = idx("experiment.arcs", i);
        if (!a[i].is_array() || a[i].size() != 2) config_error(origin, p, "expected [a, b]");
        cfg.arcs.push_back({r.number(a[i][0], p + "[0]"), r.number(a[i][1], p + "[1]")});
      }
    }
    if (e.contains("shift")) cfg.shift = static_cast<int>(r.integer(e["shift"], "experiment.shift"));
    if (e.contains("candidates")) cfg.candidates = static_cast<int>(r.integer(e["candidates"], "experiment.candidates"));
    if (e.contains("workers")) cfg.workers = static_cast<int>(r.integer(e["workers"], "experiment.workers"));
  }
  if (cfg.tasks.empty()) cfg.tasks = {"sumrule"};
  validate_config(cfg);
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  const std::string& o = cfg.spec_path.empty() ? std::string("<config>") : cfg.spec_path;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
    const auto& t = cfg.tasks[i];
    if (std::find(known_tasks().begin(), known_tasks().end(), t) == known_tasks().end())
      config_error(o, idx("experiment.tasks", i), fmt::format("unknown task '{}'", t));
    if (!seen.insert(t).second) config_error(o, idx("experiment.tasks", i), fmt::format("task '{}' listed twice", t));
  }
  if (cfg.n_max < 0 || cfg.n_max > max_n) config_error(o, "experiment.n_max", fmt::format("must be in 0..{}", max_n));
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0)) config_error(o, "experiment.eps", "must be in (0, 1)");
  if (cfg.shift < 1 || cfg.shift > 50) config_error(o, "experiment.shift", "must be in 1..50");
  if (cfg.candidates < 0 || cfg.candidates > 100000) config_error(o, "experiment.candidates", "must be in 0..100000");
  if (cfg.workers < 1 || cfg.workers > 256) config_error(o, "experiment.workers", "must be in 1..256");
  for (std::size_t i = 0; i < cfg.probes.size(); ++i)
    if (!(std::abs(cfg.probes[i]) < 1.0)) config_error(o, idx("experiment.probes", i), "must lie inside the unit disk");
  if (!is_pow2(static_cast<long long>(cfg.measure.M))) config_error(o, "grid.M", "must be a power of two >= 4");
  if (cfg.measure.kind == DensityKind::table && cfg.measure.values.size() != cfg.measure.M)
    config_error(o, "grid.M", "a tabulated density fixes the grid size");
}

ExperimentConfig validate_spec(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::configuration, fmt::format("cannot read spec file {}", path.string()));
  std::stringstream ss;
  ss << f.rdbuf();
  ExperimentConfig cfg = parse_spec(ss.str(), path.string());
  cfg.spec_path = path.string();
  return cfg;
}

namespace {

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string describe(const ExperimentConfig& cfg) {
  const MeasureSpec& m = cfg.measure;
  json j;
  json zeros = json::array();
  for (const auto& z : m.zeros) zeros.push_back({{"zeta", cplx_json(z.zeta)}, {"kappa", z.kappa}});
  j["weight"] = {{"zeros", zeros}, {"scale", m.scale}};
  json d = {{"kind", to_string(m.kind)}};
  if (m.kind == DensityKind::bernstein_szego) {
    json a = json::array();
    for (cplx v : m.alpha) a.push_back(cplx_json(v));
    d["alpha"] = a;
  }
  if (m.kind == DensityKind::ps_family) d["beta"] = m.betas;
  if (m.kind == DensityKind::table) d["values_count"] = m.values.size();
  j["density"] = d;
  json atoms = json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"angle", a.angle}, {"mass", a.mass}});
  j["atoms"] = atoms;
  j["grid"] = {{"M", m.M}, {"offset", m.offset}};
  json probes = json::array();
  for (cplx z : cfg.probes) probes.push_back(cplx_json(z));
  json arcs = json::array();
  for (const auto& a : cfg.arcs) arcs.push_back(json::array({a.a, a.b}));
  j["experiment"] = {{"tasks", cfg.tasks},   {"n_max", cfg.n_max},         {"probes", probes},
                     {"seed", cfg.seed},     {"eps", cfg.eps},             {"arcs", arcs},
                     {"shift", cfg.shift},   {"candidates", cfg.candidates}, {"workers", cfg.workers},
                     {"out", cfg.out_dir.string()}};
  return j.dump(2);
}

PSMeasure build_measure(const ExperimentConfig& cfg) {
  const MeasureSpec& m = cfg.measure;
  const WeightPoly W(m.zeros, m.scale);
  const CircleGrid grid = CircleGrid::make(m.M, m.offset);
  switch (m.kind) {
    case DensityKind::lebesgue: return make_lebesgue(m.atoms, grid, W);
    case DensityKind::bernstein_szego: return make_bernstein_szego(VerblunskySeq(m.alpha), m.atoms, grid, W);
    case DensityKind::ps_family: return make_ps_family(W, m.betas, m.atoms, grid);
    case DensityKind::table: return make_table_measure(m.values, m.atoms, grid, W);
  }
  throw Error(ErrorKind::configuration, "unknown density kind");
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::configuration ? 2 : 3; }

namespace {

constexpr double trend_floor = 1e-10;

struct TaskOutput {
  std::vector<Table> tables;
  std::vector<CheckResult> checks;
  bool failed_numerically = false;
};

struct Context {
  const ExperimentConfig& cfg;
  const PSMeasure& sigma;
  const VerblunskySeq& alpha;
  std::vector<cplx> probes;
  std::vector<Arc> arcs;
  /// Support of exactly known coefficients, if any.
  std::optional<int> exact_support;
};

std::vector<int> degree_list(int n_max) {
  std::set<int> s;
  for (int n = 0; n <= std::min(n_max, 10); ++n) s.insert(n);
  for (int n = 20; n <= n_max; n += 10) s.insert(n);
  s.insert(n_max);
  return {s.begin(), s.end()};
}

std::vector<int> even_degrees(int n_max) {
  std::vector<int> out;
  for (int n : degree_list(n_max))
    if (n % 2 == 0) out.push_back(n);
  return out;
}

CheckResult check(const std::string& task, const std::string& name, bool pass, std::string detail) {
  return {task, name, pass, std::move(detail)};
}

/// value at the last degree below value at degree 10, or both at the floor.
CheckResult trend_check(const std::string& task, const std::string& name, double at10, double at_end, int n_end) {
  const bool pass = at_end < at10 || (at_end <= trend_floor && at10 <= trend_floor);
  return check(task, name, pass, fmt::format("n=10: {} n={}: {}", num(at10), n_end, num(at_end)));
}

bool exact_at(const Context& c, int n) { return c.exact_support && n >= *c.exact_support; }

TaskOutput task_sumrule(const Context& c) {
  TaskOutput out;
  const SumRuleReport r = sum_rule(c.sigma, c.alpha, c.cfg.n_max);
  const FOriginSequence fs = f_origin_sequence(c.sigma, c.alpha, c.cfg.n_max);
  Table t{"sumrule", {"quantity", "value"}, {}};
  t.add_row({"Z_direct", num(r.Z_direct)});
  t.add_row({"Z_trace", num(r.Z_trace)});
  t.add_row({"discrepancy", num(r.discrepancy)});
  t.add_row({"A0", num(r.P.A0)});
  for (int j = 1; j <= r.P.P.degree(); ++j) {
    t.add_row({fmt::format("P_{}_re", j), num(r.P.P[j].real())});
    t.add_row({fmt::format("P_{}_im", j), num(r.P.P[j].imag())});
  }
  t.add_row({"C1", num(r.C1)});
  t.add_row({"target_half_C1_Z", num(fs.target)});
  for (std::size_t i = 0; i < r.scan.M.size(); ++i) t.add_row({fmt::format("scan_M{}", r.scan.M[i]), num(r.scan.values[i])});
  t.add_row({"scan_last_diff", num(r.scan.last_diff)});
  t.add_row({"scan_ratio", num(r.scan.ratio)});
  t.add_row({"semicontinuity_gap", num(r.semicontinuity_gap)});
  t.add_row({"max_increase_log_f0", num(fs.max_increase)});
  out.tables.push_back(std::move(t));

  Table f{"f_origin", {"n", "log_f_n0", "minus_target"}, {}};
  for (std::size_t n = 0; n < fs.log_f.size(); ++n) f.add_row({num(n), num(fs.log_f[n]), num(fs.log_f[n] - fs.target)});
  out.tables.push_back(std::move(f));

  if (std::isfinite(r.Z_trace))
    out.checks.push_back(check("sumrule", "Z_direct = Z_trace", r.discrepancy <= 1e-8,
                               fmt::format("|diff| = {}", num(r.discrepancy))));
  out.checks.push_back(check("sumrule", "log f_n(0) nonincreasing", fs.max_increase <= monotone_slack,
                             fmt::format("max step {} (first at n={})", num(fs.max_increase), fs.first_increase)));
  out.checks.push_back(check("sumrule", "semicontinuity surrogate", r.semicontinuity_gap <= 1e-6,
                             fmt::format("gap {}", num(r.semicontinuity_gap))));
  if (c.exact_support && *c.exact_support <= c.cfg.n_max) {
    const double v = fs.log_f[static_cast<std::size_t>(*c.exact_support)];
    out.checks.push_back(check("sumrule", "log f_N(0) = C1 Z / 2", std::abs(v - fs.target) <= 1e-10,
                               fmt::format("|diff| = {}", num(std::abs(v - fs.target)))));
  }
  return out;
}

TaskOutput task_pointwise(const Context& c) {
  TaskOutput out;
  const auto ns = degree_list(c.cfg.n_max);
  const auto rows = pointwise_table(c.sigma, c.alpha, c.probes, ns);
  Table t{"pointwise", {"n", "z_re", "z_im", "abs_xi_minus_1"}, {}};
  double worst_exact = 0.0;
  double at10 = NAN, at_end = NAN;
  for (const auto& r : rows) {
    t.add_row({num(r.n), num(r.z.real()), num(r.z.imag()), num(r.error)});
    if (exact_at(c, r.n)) worst_exact = std::max(worst_exact, r.error);
    if (r.z == c.probes.front()) {
      if (r.n == 10) at10 = r.error;
      if (r.n == c.cfg.n_max) at_end = r.error;
    }
  }
  out.tables.push_back(std::move(t));
  if (c.exact_support)
    out.checks.push_back(check("pointwise", "xi_n = 1 for n >= N", worst_exact <= 1e-10, fmt::format("max {}", num(worst_exact))));
  if (c.cfg.n_max > 10) out.checks.push_back(trend_check("pointwise", "|xi_n(z0) - 1| decreases", at10, at_end, c.cfg.n_max));
  return out;
}

TaskOutput task_l2(const Context& c) {
  TaskOutput out;
  Table t{"l2", {"n", "direct", "mass_formula", "expanded", "singular", "abs_direct_minus_mass"}, {}};
  double worst_mass = 0.0, worst_expanded = 0.0, worst_exact = 0.0;
  double at10 = NAN, at_end = NAN;
  for (int n : degree_list(c.cfg.n_max)) {
    const L2Row r = l2_error(c.sigma, c.alpha, n);
    const double dm = std::abs(r.direct - r.mass_formula);
    t.add_row({num(n), num(r.direct), num(r.mass_formula), num(r.expanded), num(r.singular), num(dm)});
    worst_mass = std::max(worst_mass, dm);
    worst_expanded = std::max(worst_expanded, std::abs(r.direct - r.expanded));
    if (exact_at(c, n)) worst_exact = std::max(worst_exact, r.direct);
    if (n == 10) at10 = r.direct;
    if (n == c.cfg.n_max) at_end = r.direct;
  }
  out.tables.push_back(std::move(t));
  out.checks.push_back(check("l2", "direct vs mass formula within 2e-3", worst_mass <= 2e-3, fmt::format("max |diff| {}", num(worst_mass))));
  out.checks.push_back(check("l2", "direct vs expanded square within 1e-8", worst_expanded <= 1e-8,
                             fmt::format("max |diff| {}", num(worst_expanded))));
  if (c.exact_support)
    out.checks.push_back(check("l2", "L2 error floor for n >= N", worst_exact <= 1e-8, fmt::format("max {}", num(worst_exact))));
  if (c.cfg.n_max > 10) out.checks.push_back(trend_check("l2", "L2 error decreases", at10, at_end, c.cfg.n_max));
  return out;
}

TaskOutput task_arcs(const Context& c) {
  TaskOutput out;
  Table t{"arcs", {"n", "arc", "a", "b", "error", "radial", "mass", "measure"}, {}};
  std::vector<double> gap10(c.arcs.size(), NAN), gap_end(c.arcs.size(), NAN);
  double worst_exact = 0.0;
  for (int n : degree_list(c.cfg.n_max)) {
    for (const ArcRow& r : arc_l2(c.sigma, c.alpha, c.arcs, c.cfg.eps, n)) {
      t.add_row({num(n), num(r.arc), num(c.arcs[r.arc].a), num(c.arcs[r.arc].b), num(r.error), num(r.radial),
                 num(r.mass), num(r.measure)});
      if (exact_at(c, n)) worst_exact = std::max(worst_exact, r.error);
      if (n == 10) gap10[r.arc] = std::abs(r.mass - r.measure);
      if (n == c.cfg.n_max) gap_end[r.arc] = std::abs(r.mass - r.measure);
    }
  }
  out.tables.push_back(std::move(t));
  if (c.exact_support)
    out.checks.push_back(check("arcs", "arc error floor for n >= N", worst_exact <= 1e-8, fmt::format("max {}", num(worst_exact))));
  if (c.cfg.n_max > 10)
    for (std::size_t i = 0; i < c.arcs.size(); ++i)
      out.checks.push_back(trend_check("arcs", fmt::format("|int_I |xi|^2 - m(I)| decreases (arc {})", i), gap10[i], gap_end[i],
                                       c.cfg.n_max));
  return out;
}

TaskOutput task_bound(const Context& c) {
  TaskOutput out;
  const BoundScan b = bound_scan(c.sigma, c.alpha, c.cfg.eps, c.cfg.n_max);
  Table t{"bound", {"n", "stat", "running_max"}, {}};
  double run = 0.0;
  for (std::size_t i = 0; i < b.n.size(); ++i) {
    run = std::max(run, b.stat[i]);
    t.add_row({num(b.n[i]), num(b.stat[i]), num(run)});
  }
  out.tables.push_back(std::move(t));
  out.checks.push_back(check("bound", "bound statistic growth below 5%", !b.growth_flag,
                             fmt::format("max n<=n_max/2: {} max n<=n_max: {} growth {}", num(b.max_half), num(b.max_full),
                                         num(b.growth))));
  return out;
}

std::vector<TrigPoly> rakhmanov_functions() {
  TrigPoly one(0, {cplx{1.0, 0.0}});
  TrigPoly t(1, {cplx{}, cplx{}, cplx{1.0, 0.0}});
  TrigPoly t2(2, {cplx{}, cplx{}, cplx{}, cplx{}, cplx{1.0, 0.0}});
  TrigPoly cos1(1, {cplx{0.5, 0.0}, cplx{}, cplx{0.5, 0.0}});
  return {one, t, t2, cos1};
}

TaskOutput task_rakhmanov(const Context& c) {
  TaskOutput out;
  const auto fns = rakhmanov_functions();
  const char* names[] = {"1", "t", "t^2", "cos"};
  Table t{"rakhmanov", {"n", "f", "value_re", "value_im", "reference_re", "reference_im"}, {}};
  double worst_one = 0.0, worst_exact = 0.0, at10 = NAN, at_end = NAN;
  for (int n : degree_list(c.cfg.n_max)) {
    for (const auto& r : rakhmanov_check(c.sigma, c.alpha, fns, n)) {
      t.add_row({num(n), names[r.fn], num(r.value.real()), num(r.value.imag()), num(r.reference.real()),
                 num(r.reference.imag())});
      if (r.fn == 0) worst_one = std::max(worst_one, std::abs(r.value - 1.0));
      if (exact_at(c, n)) worst_exact = std::max(worst_exact, std::abs(r.value - r.reference));
      if (r.fn == 1 && n == 10) at10 = std::abs(r.value);
      if (r.fn == 1 && n == c.cfg.n_max) at_end = std::abs(r.value);
    }
  }
  out.tables.push_back(std::move(t));
  out.checks.push_back(check("rakhmanov", "int |phi_n|^2 dsigma = 1", worst_one <= 1e-10, fmt::format("max |diff| {}", num(worst_one))));
  if (c.exact_support)
    out.checks.push_back(check("rakhmanov", "functionals exact for n >= N", worst_exact <= 1e-10,
                               fmt::format("max |diff| {}", num(worst_exact))));
  else if (c.cfg.n_max > 10)
    out.checks.push_back(trend_check("rakhmanov", "|int t |phi_n|^2 dsigma| decreases", at10, at_end, c.cfg.n_max));
  return out;
}

TaskOutput task_singular(const Context& c) {
  TaskOutput out;
  const auto s = singular_decay(c.sigma, c.alpha, c.cfg.n_max);
  Table t{"singular", {"n", "singular_mass"}, {}};
  for (std::size_t n = 0; n < s.size(); ++n) t.add_row({num(n), num(s[n])});
  out.tables.push_back(std::move(t));
  if (!c.sigma.atoms().empty() && c.cfg.n_max > 10)
    out.checks.push_back(trend_check("singular", "int |phi_n|^2 dsigma_s decreases", s[10], s.back(), c.cfg.n_max));
  return out;
}

TaskOutput task_wave(const Context& c) {
  TaskOutput out;
  const auto ns = even_degrees(c.cfg.n_max);
  const auto rows = wave_symbol_check(c.sigma, c.alpha, ns, c.cfg.shift);
  Table t{"wave", {"n", "a", "b"}, {}};
  double worst_a = 0.0, worst_b = 0.0;
  double a10 = NAN, b10 = NAN;
  for (const auto& r : rows) {
    t.add_row({num(r.n), num(r.a), num(r.b)});
    if (exact_at(c, r.n) && c.sigma.atoms().empty()) {
      worst_a = std::max(worst_a, r.a);
      worst_b = std::max(worst_b, r.b);
    }
    if (r.n == 10) {
      a10 = r.a;
      b10 = r.b;
    }
  }
  out.tables.push_back(std::move(t));
  if (c.exact_support) {
    out.checks.push_back(check("wave", "(a) at the floor for n >= N", worst_a <= 1e-6, fmt::format("max {}", num(worst_a))));
    out.checks.push_back(check("wave", "(b) vanishes for n >= N", worst_b <= 1e-12, fmt::format("max {}", num(worst_b))));
  }
  if (!rows.empty() && rows.back().n > 10) {
    out.checks.push_back(trend_check("wave", "(a) decreases", a10, rows.back().a, rows.back().n));
    out.checks.push_back(trend_check("wave", "(b) decreases", b10, rows.back().b, rows.back().n));
  }
  return out;
}

TaskOutput task_variational(const Context& c) {
  TaskOutput out;
  const NormalizedWeight p0(c.sigma.weight(), c.sigma.grid());
  const auto cands = random_outer_polys(static_cast<std::size_t>(c.cfg.candidates), 4, c.cfg.seed);
  SandwichReport r;
  try {
    r = sandwich_check(c.sigma, p0, cands, c.alpha, c.cfg.n_max);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::numerical) throw;
    out.checks.push_back(check("variational", "Jensen lower bound", false, e.what()));
    return out;
  }
  Table t{"variational", {"quantity", "value"}, {}};
  t.add_row({"C0", num(p0.C0())});
  t.add_row({"lower", num(r.lower)});
  t.add_row({"upper", num(r.upper)});
  t.add_row({"best_candidate", num(r.best_candidate)});
  t.add_row({"best_witness", num(r.best_witness)});
  t.add_row({"min_slack", num(r.min_slack)});
  t.add_row({"nu_pi", num(nu_phase(p0, pi))});
  t.add_row({"nu_2pi", num(nu_phase(p0, 2.0 * pi))});
  out.tables.push_back(std::move(t));
  Table w{"variational_witness", {"n", "inv_lambda_sq"}, {}};
  for (std::size_t n = 0; n < r.witness_values.size(); ++n) w.add_row({num(n), num(r.witness_values[n])});
  out.tables.push_back(std::move(w));
  Table cv{"variational_candidates", {"index", "degree", "scale", "value"}, {}};
  for (std::size_t i = 0; i < cands.size(); ++i)
    cv.add_row({num(i), num(cands[i].roots().size()), num(cands[i].scale()), num(r.candidate_values[i])});
  out.tables.push_back(std::move(cv));
  out.checks.push_back(check("variational", "Jensen lower bound", r.min_slack >= -sandwich_slack,
                             fmt::format("min slack {}", num(r.min_slack))));
  double tail = INFINITY;
  for (std::size_t n = r.witness_values.size() / 2; n < r.witness_values.size(); ++n) tail = std::min(tail, r.witness_values[n]);
  out.checks.push_back(check("variational", "witness tail within 1e-3 of the upper bound", tail <= r.upper + 1e-3,
                             fmt::format("tail min {} upper {}", num(tail), num(r.upper))));
  return out;
}

TaskOutput task_distance(const Context& c) {
  TaskOutput out;
  const int nd = std::min(c.cfg.n_max, 40);
  const auto mom = moments(c.sigma, std::max(nd, 1));
  double gm = NAN;
  if (c.sigma.is_szego()) gm = std::exp(quad_mean(c.sigma.grid(), c.sigma.log_density()));
  Table t{"distance", {"n", "distance", "prod_rho_sq", "exp_mean_log_density"}, {}};
  double prev = INFINITY, worst_inc = -INFINITY, worst_prod = 0.0;
  for (int n = 0; n <= nd; ++n) {
    const double d = classical_distance_from_moments(mom, n);
    const double pr = c.exact_support ? std::pow(c.alpha.A(static_cast<std::size_t>(n)), 2) : NAN;
    t.add_row({num(n), num(d), num(pr), num(gm)});
    if (n > 0) worst_inc = std::max(worst_inc, d - prev);
    if (c.exact_support) worst_prod = std::max(worst_prod, std::abs(d - pr));
    prev = d;
  }
  out.tables.push_back(std::move(t));
  if (nd > 0)
    out.checks.push_back(check("distance", "distance nonincreasing", worst_inc <= 1e-12, fmt::format("max step {}", num(worst_inc))));
  if (c.exact_support)
    out.checks.push_back(check("distance", "distance = prod (1 - |alpha_k|^2)", worst_prod <= 1e-8,
                               fmt::format("max |diff| {}", num(worst_prod))));
  return out;
}

using TaskFn = TaskOutput (*)(const Context&);

TaskFn task_function(const std::string& name) {
  if (name == "sumrule") return task_sumrule;
  if (name == "pointwise") return task_pointwise;
  if (name == "l2") return task_l2;
  if (name == "arcs") return task_arcs;
  if (name == "bound") return task_bound;
  if (name == "rakhmanov") return task_rakhmanov;
  if (name == "singular") return task_singular;
  if (name == "wave") return task_wave;
  if (name == "variational") return task_variational;
  if (name == "distance") return task_distance;
  throw Error(ErrorKind::configuration, fmt::format("unknown task '{}'", name));
}

/// Runs fn(i) for i < count on `workers` threads; results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t count, int workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  std::vector<std::thread> pool;
  for (std::size_t k = 1; k < nthreads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

std::vector<cplx> default_probes(const WeightPoly& W) {
  std::vector<cplx> base{{0.5, 0.0}, {0.0, 0.5}, {-0.5, 0.0}, {0.0, -0.5}, {0.3, 0.3}};
  std::vector<cplx> out;
  for (cplx z : base) {
    bool ok = true;
    for (const auto& zz : W.zeros()) ok = ok && std::abs(z - zz.zeta) > 1e-6;
    if (ok) out.push_back(z);
  }
  return out;
}

std::vector<Arc> default_arcs(const WeightPoly& W) {
  if (W.zeros().empty()) return {{0.0, pi}};
  const double phi = std::arg(W.zeros().front().zeta);
  return {{phi + 0.5 * pi, phi + 1.5 * pi}};
}

std::string header_line(const ExperimentConfig& cfg, const std::string& table) {
  return fmt::format("opuc {} seed={} kind={} M={} offset={} n_max={}", table, cfg.seed, to_string(cfg.measure.kind),
                     cfg.measure.M, num(cfg.measure.offset), cfg.n_max);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const PSMeasure sigma = build_measure(cfg);
  const int need = cfg.n_max + 2 * cfg.shift + 2;
  const VerblunskySeq alpha = verblunsky_from_measure(sigma, need);
  Context ctx{cfg, sigma, alpha, cfg.probes, cfg.arcs, std::nullopt};
  if (ctx.probes.empty()) ctx.probes = default_probes(sigma.weight());
  if (ctx.arcs.empty()) ctx.arcs = default_arcs(sigma.weight());
  if (sigma.known_verblunsky()) ctx.exact_support = static_cast<int>(sigma.known_verblunsky()->support());

  const std::function<TaskOutput(std::size_t)> run_one = [&](std::size_t i) {
    const std::string& name = cfg.tasks[i];
    try {
      return task_function(name)(ctx);
    } catch (const Error& e) {
      TaskOutput o;
      o.failed_numerically = e.kind() != ErrorKind::configuration;
      o.checks.push_back(check(name, "task completed", false, e.what()));
      if (!o.failed_numerically) throw;
      return o;
    }
  };
  const auto outputs = parallel_map<TaskOutput>(cfg.tasks.size(), cfg.workers, run_one);

  RunResult res;
  bool numerical = false;
  for (const auto& o : outputs) {
    numerical = numerical || o.failed_numerically;
    for (const auto& t : o.tables) res.files.push_back(write_table(cfg.out_dir, t, header_line(cfg, t.name)));
    for (const auto& ch : o.checks) res.checks.push_back(ch);
  }
  bool all_pass = true;
  Table summary{"summary", {"task", "check", "pass", "detail"}, {}};
  json js;
  js["seed"] = cfg.seed;
  js["checks"] = json::array();
  for (const auto& ch : res.checks) {
    all_pass = all_pass && ch.pass;
    summary.add_row({ch.task, ch.check, ch.pass ? "pass" : "FAIL", ch.detail});
    js["checks"].push_back({{"task", ch.task}, {"check", ch.check}, {"pass", ch.pass}, {"detail", ch.detail}});
  }
  res.exit_code = numerical ? 3 : (all_pass ? 0 : 1);
  js["exit_code"] = res.exit_code;
  res.files.push_back(write_table(cfg.out_dir, summary, header_line(cfg, "summary")));
  const auto jpath = cfg.out_dir / "summary.json";
  std::ofstream(jpath, std::ios::binary) << js.dump(2) << "\n";
  res.files.push_back(jpath);
  return res;
}

RunResult run_sweep(const ExperimentConfig& cfg, const std::string& param, const std::vector<double>& values) {
  if (param != "beta" && param != "n_max" && param != "M")
    throw Error(ErrorKind::configuration, fmt::format("sweep parameter '{}' is not one of beta, n_max, M", param));
  if (values.empty()) throw Error(ErrorKind::configuration, "sweep needs at least one value");
  if (param == "beta" && cfg.measure.kind != DensityKind::ps_family)
    throw Error(ErrorKind::configuration, "sweeping beta needs density.kind = ps_family");
  RunResult total;
  Table t{"sweep", {param, "exit_code", "passed", "failed", "message"}, {}};
  for (double v : values) {
    ExperimentConfig c = cfg;
    if (param == "beta") {
      c.measure.betas.assign(c.measure.zeros.size(), v);
    } else if (param == "n_max") {
      if (v != std::floor(v)) throw Error(ErrorKind::configuration, "n_max values must be integers");
      c.n_max = static_cast<int>(v);
    } else {
      if (v != std::floor(v)) throw Error(ErrorKind::configuration, "M values must be integers");
      c.measure.M = static_cast<std::size_t>(v);
    }
    c.out_dir = cfg.out_dir / fmt::format("{}={}", param, num(v));
    int code = 0;
    std::size_t passed = 0, failed = 0;
    std::string msg;
    try {
      validate_config(c);
      const RunResult r = run_experiment(c);
      code = r.exit_code;
      for (const auto& ch : r.checks) (ch.pass ? passed : failed) += 1;
      total.files.insert(total.files.end(), r.files.begin(), r.files.end());
      total.checks.insert(total.checks.end(), r.checks.begin(), r.checks.end());
    } catch (const Error& e) {
      code = exit_code_for(e.kind());
      msg = e.what();
    }
    t.add_row({num(v), num(code), num(passed), num(failed), msg});
    total.exit_code = std::max(total.exit_code, code);
  }
  total.files.push_back(write_table(cfg.out_dir, t, header_line(cfg, "sweep")));
  return total;
}

}  // namespace opuc
