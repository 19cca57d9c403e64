#include "perc/cli_harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "perc/cft_formulas.hpp"
#include "perc/conformal_geometry.hpp"
#include "perc/errors.hpp"
#include "perc/stats.hpp"

namespace perc::cli {
namespace {

// ---------------------------------------------------------------------------
// Schema helpers

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
}

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

double get_double(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double get_double(const json& j, const std::string& key, const std::string& where, double fallback) {
  return j.contains(key) ? get_double(j, key, where) : fallback;
}

std::int64_t get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number_integer()) throw ConfigError(where + ": '" + key + "' must be an integer");
  return j.at(key).get<std::int64_t>();
}

std::int64_t get_int(const json& j, const std::string& key, const std::string& where, std::int64_t fallback) {
  return j.contains(key) ? get_int(j, key, where) : fallback;
}

std::uint64_t get_u64(const json& j, const std::string& key, const std::string& where, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_unsigned()) throw ConfigError(where + ": '" + key + "' must be a non-negative integer");
  return j.at(key).get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  if (!j.at(key).is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

std::string get_string(const json& j, const std::string& key, const std::string& where, const std::string& fallback) {
  return j.contains(key) ? get_string(j, key, where) : fallback;
}

// A number or an array of numbers.
std::vector<double> get_doubles(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) return {};
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) throw ConfigError(where + ": '" + key + "' must be a number or an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": '" + key + "' must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Arc arc_from_json(const json& j, const std::string& where) {
  require_keys(j, {"side", "begin", "end"}, where);
  Arc arc;
  try {
    arc.side = side_from_string(get_string(j, "side", where));
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  arc.begin = static_cast<int>(get_int(j, "begin", where, 0));
  arc.end = static_cast<int>(get_int(j, "end", where, -1));
  return arc;
}

json arc_to_json(const Arc& arc) { return {{"side", to_string(arc.side)}, {"begin", arc.begin}, {"end", arc.end}}; }

std::string describe(const char* name, double v) { return std::string(name) + "=" + format_double(v); }

// ---------------------------------------------------------------------------
// Compare: predictors and measurers

struct Measurement {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool exact = false;
};

struct Prediction {
  double value = 0.0;
  std::string geometry;
};

SmallGraph graph_param(const json& j, const std::string& where) {
  if (j.contains("graph") && j.contains("graph_file")) throw ConfigError(where + ": give either 'graph' or 'graph_file'");
  if (j.contains("graph")) return graph_from_json(j.at("graph"));
  if (j.contains("graph_file")) return load_graph(get_string(j, "graph_file", where));
  throw ConfigError(where + ": missing 'graph' or 'graph_file'");
}

double evaluate_formula(const json& j, std::string& geometry, const std::string& where) {
  const std::string name = get_string(j, "formula", where);
  if (name == "crossing") {
    require_keys(j, {"formula", "eta"}, where);
    const double eta = get_double(j, "eta", where);
    geometry = describe("eta", eta);
    return crossing_probability(eta);
  }
  if (name == "mean_crossing") {
    require_keys(j, {"formula", "eta"}, where);
    const double eta = get_double(j, "eta", where);
    geometry = describe("eta", eta);
    return mean_crossing_number(eta).value;
  }
  if (name == "rectangle" || name == "rectangle_mean" || name == "kleban") {
    require_keys(j, {"formula", "r"}, where);
    const double r = get_double(j, "r", where);
    geometry = describe("r", r);
    if (name == "kleban") return kleban_crossing(r);
    const double eta = rectangle_eta(r).eta;
    return name == "rectangle" ? crossing_probability(eta) : mean_crossing_number(eta).value;
  }
  if (name == "carleson" || name == "carleson_consistency") {
    require_keys(j, {"formula", "x"}, where);
    const double x = get_double(j, "x", where);
    geometry = describe("x", x);
    return name == "carleson" ? carleson_crossing(x) : carleson_consistency(x);
  }
  if (name == "strip") {
    require_keys(j, {"formula", "ratio"}, where);
    const double ratio = get_double(j, "ratio", where);
    geometry = describe("W/L", ratio);
    return strip_mean_crossings(ratio);
  }
  if (name == "value") {
    require_keys(j, {"formula", "value"}, where);
    geometry = "constant";
    return get_double(j, "value", where);
  }
  throw ConfigError(where + ": unknown formula '" + name + "'");
}

double evaluate_enumeration(const json& j, std::string& geometry, int workers, const std::string& where) {
  require_keys(j, {"graph", "graph_file", "p", "quantity"}, where);
  const SmallGraph g = graph_param(j, where);
  const double p = get_double(j, "p", where);
  const std::string quantity = get_string(j, "quantity", where, "crossing");
  const PartitionSet ps = enumerate_partition_set(g, p, workers);
  std::ostringstream desc;
  desc << "graph:" << g.n_sites << " sites/" << g.bonds.size() << " bonds p=" << format_double(p);
  geometry = desc.str();
  if (quantity == "crossing") return crossing_prob_exact(ps);
  if (quantity == "mean_nc") return mean_crossing_exact(ps);
  throw ConfigError(where + ": quantity must be 'crossing' or 'mean_nc'");
}

Prediction predict(const json& j, int workers, const std::string& where) {
  require_object(j, where);
  Prediction pred;
  if (j.contains("formula")) {
    pred.value = evaluate_formula(j, pred.geometry, where);
  } else if (j.contains("enumerate")) {
    require_keys(j, {"enumerate"}, where);
    pred.value = evaluate_enumeration(j.at("enumerate"), pred.geometry, workers, where + ".enumerate");
  } else {
    throw ConfigError(where + ": expected 'formula' or 'enumerate'");
  }
  return pred;
}

Measurement from_crossing_stats(const CrossingStats& st, const std::string& observable, double z,
                                const std::string& where) {
  Measurement m;
  if (observable == "crossing") {
    m.value = st.p_hat;
    const Interval ci = wilson_interval(st.crossings, st.trials, z);
    m.ci_low = ci.low;
    m.ci_high = ci.high;
  } else if (observable == "mean_nc") {
    m.value = st.mean_nc;
    m.ci_low = st.mean_nc - z * st.se_nc;
    m.ci_high = st.mean_nc + z * st.se_nc;
  } else {
    throw ConfigError(where + ": observable must be 'crossing' or 'mean_nc'");
  }
  return m;
}

Measurement measure(const json& j, std::uint64_t n_trials, std::uint64_t seed, int workers, double z,
                    const std::string& where) {
  require_object(j, where);
  if (j.size() != 1) throw ConfigError(where + ": expected exactly one of mc, smirnov, strip, sle, enumerate, formula");
  const std::string key = j.begin().key();
  const json& body = j.begin().value();
  const std::string at = where + "." + key;
  if (key == "mc") {
    require_keys(body, {"lattice", "graph", "graph_file", "p", "observable"}, at);
    const std::string observable = get_string(body, "observable", at, "crossing");
    CrossingStats st;
    if (body.contains("lattice")) {
      if (body.contains("p")) throw ConfigError(at + ": 'p' belongs inside 'lattice'");
      st = run_experiment(lattice_spec_from_json(body.at("lattice")), n_trials, seed, workers);
    } else {
      const double p = get_double(body, "p", at);
      st = run_experiment(lattice_from_graph(graph_param(body, at)), p, n_trials, seed, workers);
    }
    return from_crossing_stats(st, observable, z, at);
  }
  if (key == "smirnov") {
    require_keys(body, {"side", "p", "x"}, at);
    const int side = static_cast<int>(get_int(body, "side", at));
    const double p = get_double(body, "p", at, kCriticalP);
    const double x = get_double(body, "x", at);
    const auto e = smirnov_h(smirnov_spec(side, p, x), x, n_trials, seed, workers);
    const Interval ci = wilson_interval(e.hits, e.trials, z);
    return {e.h_hat, ci.low, ci.high, false};
  }
  if (key == "strip") {
    require_keys(body, {"L", "W", "p", "lattice_kind"}, at);
    const int l = static_cast<int>(get_int(body, "L", at));
    const int w = static_cast<int>(get_int(body, "W", at));
    const double p = get_double(body, "p", at, kCriticalP);
    LatticeKind kind = LatticeKind::square_bond;
    try {
      kind = lattice_kind_from_string(get_string(body, "lattice_kind", at, "square_bond"));
    } catch (const InvalidInput& e) {
      throw ConfigError(at + ": " + e.what());
    }
    return from_crossing_stats(strip_crossing_count(l, w, p, n_trials, seed, workers, kind), "mean_nc", z, at);
  }
  if (key == "sle") {
    const double a = get_double(body, "a", at);
    const double b = get_double(body, "b", at);
    const SleParams params = sle_params_from_json(body, a, b);
    const auto e = estimate_left_first(a, b, n_trials, params, seed, workers);
    const Interval ci = wilson_interval(e.left_first, e.left_first + e.right_first, z);
    return {e.p_hat, ci.low, ci.high, false};
  }
  if (key == "enumerate") {
    std::string ignored;
    const double v = evaluate_enumeration(body, ignored, workers, at);
    return {v, v, v, true};
  }
  if (key == "formula") {
    std::string ignored;
    const double v = evaluate_formula(body, ignored, at);
    return {v, v, v, true};
  }
  throw ConfigError(where + ": unknown measurer '" + key + "'");
}

template <typename F>
void append_formula_row(Table& t, const std::string& quantity, const std::string& parameter, double argument, F&& f) {
  std::string status = "ok";
  double value = std::nan("");
  try {
    value = f();
  } catch (const std::exception& e) {
    status = std::string("error: ") + e.what();
  }
  t.rows.push_back({quantity, parameter, argument, value, status});
}

Table stats_table(const std::string& kind, std::uint64_t seed) {
  Table t;
  t.kind = kind;
  t.master_seed = seed;
  t.columns = {"lattice", "shape", "nx", "ny", "p", "trials", "crossings", "p_hat", "p_ci_low", "p_ci_high",
               "mean_nc", "se_nc", "master_seed", "effective_aspect_ratio"};
  return t;
}

void append_stats(Table& t, const LatticeSpec& spec, const CrossingStats& st) {
  t.rows.push_back({to_string(spec.kind), to_string(spec.shape), std::int64_t{spec.nx}, std::int64_t{spec.ny}, spec.p,
                    st.trials, st.crossings, st.p_hat, st.p_ci_low, st.p_ci_high, st.mean_nc, st.se_nc,
                    st.master_seed, st.effective_aspect_ratio});
}

std::string polynomial_string(const QPolynomial& q) {
  std::string s;
  for (double c : q.coefficients()) {
    if (!s.empty()) s += ' ';
    s += format_double(c);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::ostringstream out;
  out << "# percolab " << t.kind;
  if (t.master_seed) out << " master_seed=" << *t.master_seed;
  out << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::string>) {
              if (v.find_first_of(",\"\n") == std::string::npos) {
                out << v;
              } else {
                out << '"';
                for (char c : v) out << (c == '"' ? "\"\"" : std::string(1, c));
                out << '"';
              }
            } else if constexpr (std::is_same_v<V, double>) {
              out << format_double(v);
            } else if constexpr (std::is_same_v<V, bool>) {
              out << (v ? "true" : "false");
            } else {
              out << v;
            }
          },
          row[i]);
    }
    out << '\n';
  }
  return out.str();
}

json to_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>) {
              obj[t.columns[i]] = std::isfinite(v) ? json(v) : json(nullptr);
            } else {
              obj[t.columns[i]] = v;
            }
          },
          row[i]);
    }
    rows.push_back(std::move(obj));
  }
  json out = {{"kind", t.kind}, {"columns", t.columns}, {"rows", std::move(rows)}};
  out["master_seed"] = t.master_seed ? json(*t.master_seed) : json(nullptr);
  return out;
}

void write_table(const Table& t, Format format, std::ostream& out) {
  if (format == Format::csv) {
    out << to_csv(t);
  } else {
    out << to_json(t).dump(2) << '\n';
  }
}

ComparisonRow make_comparison(std::string label, std::string geometry, double predicted, double measured,
                              double ci_low, double ci_high) {
  ComparisonRow r;
  r.label = std::move(label);
  r.geometry = std::move(geometry);
  r.predicted = predicted;
  r.measured = measured;
  r.ci_low = ci_low;
  r.ci_high = ci_high;
  r.abs_error = std::abs(predicted - measured);
  r.within_ci = predicted >= ci_low && predicted <= ci_high;
  return r;
}

json to_json(const ComparisonRow& r) {
  return {{"label", r.label},         {"geometry", r.geometry}, {"predicted", r.predicted},
          {"measured", r.measured},   {"ci_low", r.ci_low},     {"ci_high", r.ci_high},
          {"abs_error", r.abs_error}, {"within_ci", r.within_ci}};
}

ComparisonRow comparison_from_json(const json& j) {
  const std::string where = "comparison row";
  require_keys(j, {"label", "geometry", "predicted", "measured", "ci_low", "ci_high", "abs_error", "within_ci"}, where);
  ComparisonRow r;
  r.label = get_string(j, "label", where);
  r.geometry = get_string(j, "geometry", where);
  r.predicted = get_double(j, "predicted", where);
  r.measured = get_double(j, "measured", where);
  r.ci_low = get_double(j, "ci_low", where);
  r.ci_high = get_double(j, "ci_high", where);
  r.abs_error = get_double(j, "abs_error", where);
  if (!j.at("within_ci").is_boolean()) throw ConfigError(where + ": 'within_ci' must be a boolean");
  r.within_ci = j.at("within_ci").get<bool>();
  return r;
}

Table comparison_table(const std::vector<ComparisonRow>& rows, std::optional<std::uint64_t> master_seed) {
  Table t;
  t.kind = "compare";
  t.master_seed = master_seed;
  t.columns = {"label", "geometry", "predicted", "measured", "ci_low", "ci_high", "abs_error", "within_ci"};
  for (const auto& r : rows) {
    t.rows.push_back({r.label, r.geometry, r.predicted, r.measured, r.ci_low, r.ci_high, r.abs_error, r.within_ci});
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON <-> domain types

LatticeSpec lattice_spec_from_json(const json& j) {
  const std::string where = "lattice";
  require_keys(j, {"kind", "shape", "nx", "ny", "p", "gamma1", "gamma2"}, where);
  LatticeSpec s;
  try {
    s.kind = lattice_kind_from_string(get_string(j, "kind", where, "triangular_site"));
    s.shape = shape_from_string(get_string(j, "shape", where, "rectangle"));
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  s.nx = static_cast<int>(get_int(j, "nx", where));
  s.ny = static_cast<int>(get_int(j, "ny", where, s.shape == Shape::equilateral_triangle ? s.nx : 1));
  s.p = get_double(j, "p", where, kCriticalP);
  if (s.shape == Shape::periodic_strip) {
    s.gamma1 = {Side::bottom};
    s.gamma2 = {Side::top};
  } else if (s.shape == Shape::equilateral_triangle) {
    s.gamma1 = {Side::ab, 0, s.nx - 1};
    s.gamma2 = {Side::bc};
  }
  if (j.contains("gamma1")) s.gamma1 = arc_from_json(j.at("gamma1"), where + ".gamma1");
  if (j.contains("gamma2")) s.gamma2 = arc_from_json(j.at("gamma2"), where + ".gamma2");
  try {
    validate(s);
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

json to_json(const LatticeSpec& s) {
  return {{"kind", to_string(s.kind)}, {"shape", to_string(s.shape)}, {"nx", s.nx},
          {"ny", s.ny},                {"p", s.p},                      {"gamma1", arc_to_json(s.gamma1)},
          {"gamma2", arc_to_json(s.gamma2)}};
}

SmallGraph graph_from_json(const json& j) {
  const std::string where = "graph";
  require_keys(j, {"n_sites", "bonds", "gamma1", "gamma2"}, where);
  SmallGraph g;
  const auto n = get_int(j, "n_sites", where);
  if (n < 0) throw ConfigError(where + ": n_sites must be non-negative");
  g.n_sites = static_cast<std::uint32_t>(n);
  const auto sites = [&](const std::string& key) {
    std::vector<std::uint32_t> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw ConfigError(where + ": '" + key + "' must be an array of site indices");
    for (const auto& v : j.at(key)) {
      if (!v.is_number_unsigned()) throw ConfigError(where + ": '" + key + "' must hold non-negative integers");
      out.push_back(v.get<std::uint32_t>());
    }
    return out;
  };
  if (j.contains("bonds")) {
    if (!j.at("bonds").is_array()) throw ConfigError(where + ": 'bonds' must be an array of [u, v] pairs");
    for (const auto& b : j.at("bonds")) {
      if (!b.is_array() || b.size() != 2 || !b[0].is_number_unsigned() || !b[1].is_number_unsigned()) {
        throw ConfigError(where + ": each bond must be a pair [u, v] of site indices");
      }
      g.bonds.emplace_back(b[0].get<std::uint32_t>(), b[1].get<std::uint32_t>());
    }
  }
  g.gamma1 = sites("gamma1");
  g.gamma2 = sites("gamma2");
  try {
    validate(g);
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return g;
}

json to_json(const SmallGraph& g) {
  json bonds = json::array();
  for (const auto& [u, v] : g.bonds) bonds.push_back({u, v});
  return {{"n_sites", g.n_sites}, {"bonds", bonds}, {"gamma1", g.gamma1}, {"gamma2", g.gamma2}};
}

SmallGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file '" + path + "'");
  try {
    return graph_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("graph file '" + path + "': " + e.what());
  }
}

SleParams sle_params_from_json(const json& j, double a, double b) {
  const std::string where = "sle";
  require_keys(j, {"a", "b", "kappa", "dt0", "eps_swallow", "t_max", "c_gap", "adaptive"}, where);
  if (!(a > 0.0 && b > 0.0)) throw ConfigError(where + ": a and b must be positive");
  SleParams p = SleParams::defaults_for(a, b);
  p.kappa = get_double(j, "kappa", where, p.kappa);
  p.dt0 = get_double(j, "dt0", where, p.dt0);
  p.eps_swallow = get_double(j, "eps_swallow", where, p.eps_swallow);
  p.t_max = get_double(j, "t_max", where, p.t_max);
  p.c_gap = get_double(j, "c_gap", where, p.c_gap);
  if (j.contains("adaptive")) {
    if (!j.at("adaptive").is_boolean()) throw ConfigError(where + ": 'adaptive' must be a boolean");
    p.adaptive = j.at("adaptive").get<bool>();
  }
  try {
    validate(p);
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Config

ExperimentConfig parse_config(const json& j) {
  require_object(j, "config");
  ExperimentConfig c;
  c.kind = get_string(j, "kind", "config");
  static const std::set<std::string> common = {"kind", "output", "master_seed", "n_trials", "workers"};
  std::set<std::string> specific;
  if (c.kind == "formula") {
    specific = {"eta", "rect_r", "triangle_x", "strip_ratio"};
  } else if (c.kind == "geometry") {
    specific = {"r", "k", "x"};
  } else if (c.kind == "mc") {
    specific = {"lattice", "graph", "graph_file", "p", "smirnov", "strip"};
  } else if (c.kind == "enumerate") {
    specific = {"graph", "graph_file", "p"};
  } else if (c.kind == "sle") {
    specific = {"a", "b", "kappa", "dt0", "eps_swallow", "t_max", "c_gap", "adaptive"};
  } else if (c.kind == "compare") {
    specific = {"checks"};
  } else {
    throw ConfigError("config: unknown kind '" + c.kind + "'");
  }
  std::set<std::string> allowed = common;
  allowed.insert(specific.begin(), specific.end());
  require_keys(j, allowed, "config");

  c.master_seed = get_u64(j, "master_seed", "config", c.master_seed);
  c.n_trials = get_u64(j, "n_trials", "config", c.n_trials);
  if (c.n_trials < 1) throw ConfigError("config: n_trials must be >= 1");
  c.workers = static_cast<int>(get_int(j, "workers", "config", c.workers));
  if (c.workers < 1) throw ConfigError("config: workers must be >= 1");
  if (j.contains("output")) {
    const json& o = j.at("output");
    require_keys(o, {"path", "format"}, "config.output");
    c.output.path = get_string(o, "path", "config.output", "");
    const std::string fmt = get_string(o, "format", "config.output", "csv");
    if (fmt == "csv") {
      c.output.format = Format::csv;
    } else if (fmt == "json") {
      c.output.format = Format::json;
    } else {
      throw ConfigError("config.output: format must be 'csv' or 'json'");
    }
  }
  c.params = json::object();
  for (const auto& key : specific) {
    if (j.contains(key)) c.params[key] = j.at(key);
  }

  // Validate the kind-specific part up front, before any work starts.
  const json& p = c.params;
  if (c.kind == "formula") {
    for (const char* key : {"eta", "rect_r", "triangle_x", "strip_ratio"}) get_doubles(p, key, "config");
  } else if (c.kind == "geometry") {
    for (const char* key : {"r", "k", "x"}) get_doubles(p, key, "config");
  } else if (c.kind == "mc") {
    int sources = 0;
    for (const char* key : {"lattice", "graph", "graph_file", "smirnov", "strip"}) sources += p.contains(key);
    if (p.contains("graph") && p.contains("graph_file")) --sources;
    if (sources != 1) throw ConfigError("config: mc needs exactly one of lattice, graph/graph_file, smirnov, strip");
    if (p.contains("lattice")) {
      if (p.contains("p")) throw ConfigError("config: 'p' belongs inside 'lattice'");
      lattice_spec_from_json(p.at("lattice"));
    }
    if (p.contains("graph") || p.contains("graph_file")) {
      graph_param(p, "config");
      get_double(p, "p", "config");
    }
    if (p.contains("smirnov")) {
      require_keys(p.at("smirnov"), {"side", "p", "x"}, "config.smirnov");
      get_int(p.at("smirnov"), "side", "config.smirnov");
      if (get_doubles(p.at("smirnov"), "x", "config.smirnov").empty()) throw ConfigError("config.smirnov: missing 'x'");
    }
    if (p.contains("strip")) {
      require_keys(p.at("strip"), {"L", "W", "p", "lattice_kind"}, "config.strip");
      get_int(p.at("strip"), "L", "config.strip");
      get_int(p.at("strip"), "W", "config.strip");
    }
  } else if (c.kind == "enumerate") {
    graph_param(p, "config");
    get_double(p, "p", "config");
  } else if (c.kind == "sle") {
    sle_params_from_json(p, get_double(p, "a", "config"), get_double(p, "b", "config"));
  } else if (c.kind == "compare") {
    if (!p.contains("checks") || !p.at("checks").is_array() || p.at("checks").empty()) {
      throw ConfigError("config: compare needs a non-empty 'checks' array");
    }
    for (const auto& check : p.at("checks")) {
      require_keys(check, {"label", "predictor", "measurer", "tolerance", "z", "n_trials", "master_seed"},
                   "config.checks[]");
      get_string(check, "label", "config.checks[]");
      if (!check.contains("predictor") || !check.contains("measurer")) {
        throw ConfigError("config.checks[]: each check needs 'predictor' and 'measurer'");
      }
      require_object(check.at("predictor"), "config.checks[].predictor");
      require_object(check.at("measurer"), "config.checks[].measurer");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return parse_config(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

std::optional<int> workers_from_environment() {
  const char* v = std::getenv("PERCOLAB_WORKERS");
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw ConfigError("PERCOLAB_WORKERS must be a positive integer");
  return static_cast<int>(n);
}

// ---------------------------------------------------------------------------
// Commands

Table cmd_formula(const FormulaArgs& args) {
  Table t;
  t.kind = "formula";
  t.columns = {"quantity", "parameter", "argument", "value", "status"};
  for (double eta : args.eta) {
    append_formula_row(t, "crossing_probability", "eta", eta, [&] { return crossing_probability(eta); });
    std::string accuracy = "ok";
    append_formula_row(t, "mean_crossing_number", "eta", eta, [&] {
      const MeanCrossing m = mean_crossing_number(eta);
      if (m.accuracy == SeriesAccuracy::asymptotic) accuracy = "asymptotic: eta < 0.01, E[N_c] ~ P(eta)";
      return m.value;
    });
    if (accuracy != "ok") std::get<std::string>(t.rows.back().back()) = accuracy;
  }
  for (double r : args.rect_r) {
    append_formula_row(t, "rectangle_eta", "r", r, [&] { return rectangle_eta(r).eta; });
    append_formula_row(t, "crossing_probability", "r", r, [&] { return crossing_probability(rectangle_eta(r)); });
    append_formula_row(t, "kleban_crossing", "r", r, [&] { return kleban_crossing(r); });
    append_formula_row(t, "mean_crossing_number", "r", r,
                       [&] { return mean_crossing_number(rectangle_eta(r).eta).value; });
  }
  for (double x : args.triangle_x) {
    append_formula_row(t, "triangle_eta", "x", x, [&] { return triangle_eta(x).eta; });
    append_formula_row(t, "carleson_crossing", "x", x, [&] { return carleson_crossing(x); });
    append_formula_row(t, "carleson_consistency", "x", x, [&] { return carleson_consistency(x); });
  }
  for (double ratio : args.strip_ratio) {
    append_formula_row(t, "strip_mean_crossings", "W/L", ratio, [&] { return strip_mean_crossings(ratio); });
  }
  return t;
}

Table cmd_geometry(const GeometryArgs& args) {
  Table t;
  t.kind = "geometry";
  t.columns = {"input", "argument", "r", "k", "eta", "x", "status"};
  const double nan = std::nan("");
  const auto guarded = [&](const std::string& input, double arg, auto&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      t.rows.push_back({input, arg, nan, nan, nan, nan, std::string("error: ") + e.what()});
    }
  };
  for (double r : args.r) {
    guarded("r", r, [&] {
      const auto g = rectangle_from_aspect(r);
      t.rows.push_back({std::string("r"), r, g.r, g.k, g.eta.eta, nan, std::string("ok")});
    });
  }
  for (double k : args.k) {
    guarded("k", k, [&] {
      const auto g = rectangle_from_modulus(k);
      t.rows.push_back({std::string("k"), k, g.r, g.k, g.eta.eta, nan, std::string("ok")});
    });
  }
  for (double x : args.x) {
    guarded("x", x, [&] {
      const auto g = triangle_from_segment(x);
      t.rows.push_back({std::string("x"), x, nan, nan, g.eta.eta, g.x, std::string("ok")});
    });
  }
  return t;
}

Table cmd_mc(const LatticeSpec& spec, std::uint64_t n_trials, std::uint64_t master_seed, int workers) {
  Table t = stats_table("mc", master_seed);
  append_stats(t, spec, run_experiment(spec, n_trials, master_seed, workers));
  return t;
}

Table cmd_smirnov(int side_sites, double p, const std::vector<double>& xs, std::uint64_t n_trials,
                  std::uint64_t master_seed, int workers) {
  Table t;
  t.kind = "smirnov";
  t.master_seed = master_seed;
  t.columns = {"side_sites", "p", "x_requested", "x_effective", "segment_sites", "trials", "hits", "h_hat",
               "ci_low",     "ci_high", "master_seed"};
  for (double x : xs) {
    const auto e = smirnov_h(smirnov_spec(side_sites, p, x), x, n_trials, master_seed, workers);
    t.rows.push_back({std::int64_t{side_sites}, p, e.x_requested, e.x_effective, std::int64_t{e.segment_sites},
                      e.trials, e.hits, e.h_hat, e.ci_low, e.ci_high, e.master_seed});
  }
  return t;
}

Table cmd_strip(int l_sites, int w_sites, double p, LatticeKind kind, std::uint64_t n_trials,
                std::uint64_t master_seed, int workers) {
  Table t = stats_table("strip", master_seed);
  append_stats(t, strip_spec(l_sites, w_sites, p, kind),
               strip_crossing_count(l_sites, w_sites, p, n_trials, master_seed, workers, kind));
  return t;
}

Table cmd_enumerate(const SmallGraph& graph, double p, int workers) {
  const PartitionSet ps = enumerate_partition_set(graph, p, workers);
  Table t;
  t.kind = "enumerate";
  t.columns = {"quantity", "value", "coefficients"};
  t.rows.push_back({std::string("p"), p, std::string()});
  const std::pair<const char*, const QPolynomial*> members[] = {
      {"z_ff", &ps.z_ff}, {"z_aa", &ps.z_aa}, {"z_ab", &ps.z_ab}, {"z_af", &ps.z_af}, {"z_fa", &ps.z_fa}};
  for (const auto& [name, poly] : members) t.rows.push_back({std::string(name), (*poly)(1.0), polynomial_string(*poly)});
  t.rows.push_back({std::string("crossing_prob_exact"), crossing_prob_exact(ps), std::string()});
  t.rows.push_back({std::string("mean_crossing_exact"), mean_crossing_exact(ps), std::string()});
  t.rows.push_back({std::string("mean_crossing_product_form"), mean_crossing_product_form(ps), std::string()});
  return t;
}

Table cmd_sle(double a, double b, std::uint64_t n_traces, const SleParams& params, std::uint64_t master_seed,
              int workers) {
  const RaceEstimate e = estimate_left_first(a, b, n_traces, params, master_seed, workers);
  Table t;
  t.kind = "sle";
  t.master_seed = master_seed;
  t.columns = {"a",      "b",       "eta", "n",   "p_hat", "ci_low",     "ci_high",
               "unresolved_fraction", "dt0", "eps", "kappa", "master_seed", "predicted"};
  t.rows.push_back({a, b, e.eta, e.traces, e.p_hat, e.ci_low, e.ci_high, e.unresolved_fraction, params.dt0,
                    params.eps_swallow, params.kappa, master_seed, crossing_probability(e.eta)});
  return t;
}

CompareResult cmd_compare(const ExperimentConfig& config, const std::function<void(const ComparisonRow&)>& on_row) {
  if (config.kind != "compare") throw ConfigError("cmd_compare: config kind is '" + config.kind + "'");
  CompareResult result;
  std::size_t index = 0;
  for (const auto& check : config.params.at("checks")) {
    const std::string where = "checks[" + std::to_string(index++) + "]";
    const std::string label = get_string(check, "label", where);
    const std::uint64_t n = get_u64(check, "n_trials", where, config.n_trials);
    const std::uint64_t seed = get_u64(check, "master_seed", where, config.master_seed);
    const double z = get_double(check, "z", where, kZ95);
    const Prediction pred = predict(check.at("predictor"), config.workers, where + ".predictor");
    Measurement m = measure(check.at("measurer"), n, seed, config.workers, z, where + ".measurer");
    if (check.contains("tolerance")) {
      const double tol = get_double(check, "tolerance", where);
      m.ci_low = m.value - tol;
      m.ci_high = m.value + tol;
    } else if (m.exact) {
      m.ci_low = m.value - 1e-12;
      m.ci_high = m.value + 1e-12;
    }
    ComparisonRow row = make_comparison(label, pred.geometry, pred.value, m.value, m.ci_low, m.ci_high);
    result.all_within = result.all_within && row.within_ci;
    if (on_row) on_row(row);
    result.rows.push_back(std::move(row));
  }
  return result;
}

int run_config(const ExperimentConfig& c, std::ostream& out) {
  const json& p = c.params;
  Table table;
  int code = kOk;
  if (c.kind == "formula") {
    FormulaArgs a{get_doubles(p, "eta", "config"), get_doubles(p, "rect_r", "config"),
                  get_doubles(p, "triangle_x", "config"), get_doubles(p, "strip_ratio", "config")};
    table = cmd_formula(a);
  } else if (c.kind == "geometry") {
    table = cmd_geometry({get_doubles(p, "r", "config"), get_doubles(p, "k", "config"), get_doubles(p, "x", "config")});
  } else if (c.kind == "mc") {
    if (p.contains("lattice")) {
      table = cmd_mc(lattice_spec_from_json(p.at("lattice")), c.n_trials, c.master_seed, c.workers);
    } else if (p.contains("smirnov")) {
      const json& s = p.at("smirnov");
      table = cmd_smirnov(static_cast<int>(get_int(s, "side", "config.smirnov")),
                          get_double(s, "p", "config.smirnov", kCriticalP), get_doubles(s, "x", "config.smirnov"),
                          c.n_trials, c.master_seed, c.workers);
    } else if (p.contains("strip")) {
      const json& s = p.at("strip");
      LatticeKind kind = LatticeKind::square_bond;
      try {
        kind = lattice_kind_from_string(get_string(s, "lattice_kind", "config.strip", "square_bond"));
      } catch (const InvalidInput& e) {
        throw ConfigError(std::string("config.strip: ") + e.what());
      }
      table = cmd_strip(static_cast<int>(get_int(s, "L", "config.strip")),
                        static_cast<int>(get_int(s, "W", "config.strip")),
                        get_double(s, "p", "config.strip", kCriticalP), kind, c.n_trials, c.master_seed, c.workers);
    } else {
      const SmallGraph g = graph_param(p, "config");
      const double prob = get_double(p, "p", "config");
      const CrossingStats st = run_experiment(lattice_from_graph(g), prob, c.n_trials, c.master_seed, c.workers);
      table = stats_table("mc", c.master_seed);
      table.rows.push_back({std::string("graph"), std::string("graph"), std::int64_t{g.n_sites},
                            std::int64_t(g.bonds.size()), prob, st.trials, st.crossings, st.p_hat, st.p_ci_low,
                            st.p_ci_high, st.mean_nc, st.se_nc, st.master_seed, st.effective_aspect_ratio});
    }
  } else if (c.kind == "enumerate") {
    table = cmd_enumerate(graph_param(p, "config"), get_double(p, "p", "config"), c.workers);
  } else if (c.kind == "sle") {
    const double a = get_double(p, "a", "config");
    const double b = get_double(p, "b", "config");
    table = cmd_sle(a, b, c.n_trials, sle_params_from_json(p, a, b), c.master_seed, c.workers);
  } else if (c.kind == "compare") {
    std::vector<ComparisonRow> done;
    try {
      const CompareResult r = cmd_compare(c, [&](const ComparisonRow& row) { done.push_back(row); });
      code = r.all_within ? kOk : kCheckFailed;
    } catch (...) {
      // Flush what finished before the failure, then let the caller map the error.
      write_table(comparison_table(done, c.master_seed), c.output.format, out);
      out.flush();
      throw;
    }
    table = comparison_table(done, c.master_seed);
  } else {
    throw ConfigError("config: unknown kind '" + c.kind + "'");
  }
  write_table(table, c.output.format, out);
  return code;
}

}  // namespace perc::cli
