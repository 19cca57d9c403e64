// percolab: crossing-probability formulas, geometry conversions and
// Monte Carlo / enumeration / SLE experiments.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "perc/cli_harness.hpp"
#include "perc/errors.hpp"

namespace {

using perc::cli::json;

const char* kColumns = R"(CSV columns (fixed order; first line is "# percolab <kind> master_seed=<seed>"):
  formula    quantity,parameter,argument,value,status
  geometry   input,argument,r,k,eta,x,status
  mc         lattice,shape,nx,ny,p,trials,crossings,p_hat,p_ci_low,p_ci_high,
             mean_nc,se_nc,master_seed,effective_aspect_ratio
  smirnov    side_sites,p,x_requested,x_effective,segment_sites,trials,hits,
             h_hat,ci_low,ci_high,master_seed
  strip      same columns as mc
  enumerate  quantity,value,coefficients
  sle        a,b,eta,n,p_hat,ci_low,ci_high,unresolved_fraction,dt0,eps,kappa,
             master_seed,predicted
  compare    label,geometry,predicted,measured,ci_low,ci_high,abs_error,within_ci
Floats carry 17 significant digits.
Exit codes: 0 all checks pass, 1 numeric check failed, 2 config error.
Worker count: config < PERCOLAB_WORKERS < --workers.)";

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw perc::cli::ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw perc::cli::ConfigError("config file '" + path + "': " + e.what());
  }
}

template <typename T>
void put_list(json& j, const char* key, const std::vector<T>& v) {
  if (!v.empty()) j[key] = v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Percolation crossing-probability laboratory"};
  app.footer(kColumns);
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_path;
  std::string format;
  app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed (u64)");
  auto* workers_opt = app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Output file (default stdout)");
  auto* format_opt = app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // formula
  std::vector<double> f_eta, f_rect, f_tri, f_strip;
  auto* formula = app.add_subcommand("formula", "Crossing formulas over a grid of eta, r, x or W/L");
  formula->add_option("--eta", f_eta, "Cross-ratio values");
  formula->add_option("--rect-r", f_rect, "Rectangle aspect ratios W/L");
  formula->add_option("--triangle-x", f_tri, "Equilateral triangle segment lengths");
  formula->add_option("--strip-ratio", f_strip, "Periodic strip ratios W/L");

  // geometry
  std::vector<double> g_r, g_k, g_x;
  auto* geometry = app.add_subcommand("geometry", "Rectangle and triangle conversions to eta");
  geometry->add_option("--r", g_r, "Rectangle aspect ratios");
  geometry->add_option("--k", g_k, "Elliptic moduli");
  geometry->add_option("--x", g_x, "Triangle segment lengths");

  // mc
  std::string m_lattice = "triangular_site", m_shape = "rectangle", m_graph;
  int m_nx = 0, m_ny = 0, m_side = 0, m_l = 0, m_w = 0;
  double m_p = 0.5;
  std::uint64_t n_trials = 0;
  std::vector<double> m_x;
  auto* mc = app.add_subcommand("mc", "Monte Carlo crossing experiment");
  auto* lattice_opt = mc->add_option("--lattice", m_lattice, "square_bond | triangular_site (strips default to square_bond)")
      ->check(CLI::IsMember({"square_bond", "triangular_site"}));
  mc->add_option("--shape", m_shape, "rectangle | equilateral_triangle | periodic_strip")
      ->check(CLI::IsMember({"rectangle", "equilateral_triangle", "periodic_strip"}));
  mc->add_option("--nx", m_nx, "Sites across");
  mc->add_option("--ny", m_ny, "Sites down");
  mc->add_option("--p", m_p, "Occupation probability");
  mc->add_option("--graph", m_graph, "Explicit graph JSON instead of a lattice")->check(CLI::ExistingFile);
  mc->add_option("--smirnov-side", m_side, "Triangle side in sites: run the boundary observable");
  mc->add_option("--x", m_x, "Boundary points for --smirnov-side");
  mc->add_option("--strip-L", m_l, "Strip height in lattice spacings");
  mc->add_option("--strip-W", m_w, "Strip circumference in sites");
  auto* mc_n = mc->add_option("-n,--trials", n_trials, "Number of trials");

  // enumerate
  std::string e_graph;
  double e_p = 0.5;
  auto* enumerate = app.add_subcommand("enumerate", "Exact random-cluster enumeration on a small graph");
  enumerate->add_option("--graph", e_graph, "Graph JSON")->required()->check(CLI::ExistingFile);
  enumerate->add_option("--p", e_p, "Bond probability");

  // sle
  double s_a = 1.0, s_b = 1.0, s_kappa = 6.0, s_dt0 = 0.0, s_eps = 0.0, s_tmax = 0.0, s_cgap = 0.0;
  bool s_fixed = false;
  auto* sle = app.add_subcommand("sle", "SLE swallowing race between -a and b");
  sle->add_option("--a", s_a, "Left point distance")->check(CLI::PositiveNumber);
  sle->add_option("--b", s_b, "Right point distance")->check(CLI::PositiveNumber);
  auto* sle_n = sle->add_option("-n,--traces", n_trials, "Number of traces");
  sle->add_option("--kappa", s_kappa, "SLE parameter");
  auto* sle_dt0 = sle->add_option("--dt0", s_dt0, "Largest time step");
  auto* sle_eps = sle->add_option("--eps", s_eps, "Swallow threshold");
  auto* sle_tmax = sle->add_option("--t-max", s_tmax, "Time cap per trace");
  auto* sle_cgap = sle->add_option("--c-gap", s_cgap, "Step size relative to the squared gap");
  sle->add_flag("--fixed-step", s_fixed, "Disable gap-adaptive steps");

  // compare
  auto* compare = app.add_subcommand("compare", "Prediction vs measurement table from a config");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? perc::cli::kOk : perc::cli::kConfigError;
  }

  try {
    json cfg;
    CLI::App* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
    if (!config_path.empty()) {
      cfg = load_json(config_path);
      if (sub != nullptr && cfg.is_object() && cfg.value("kind", std::string()) != sub->get_name()) {
        throw perc::cli::ConfigError("config kind does not match subcommand '" + sub->get_name() + "'");
      }
    } else if (sub == nullptr) {
      std::cerr << app.help();
      return perc::cli::kConfigError;
    } else if (sub == compare) {
      throw perc::cli::ConfigError("compare needs --config");
    } else if (sub == formula) {
      cfg = {{"kind", "formula"}};
      put_list(cfg, "eta", f_eta);
      put_list(cfg, "rect_r", f_rect);
      put_list(cfg, "triangle_x", f_tri);
      put_list(cfg, "strip_ratio", f_strip);
    } else if (sub == geometry) {
      cfg = {{"kind", "geometry"}};
      put_list(cfg, "r", g_r);
      put_list(cfg, "k", g_k);
      put_list(cfg, "x", g_x);
    } else if (sub == mc) {
      cfg = {{"kind", "mc"}};
      if (!m_graph.empty()) {
        cfg["graph_file"] = m_graph;
        cfg["p"] = m_p;
      } else if (m_side > 0) {
        cfg["smirnov"] = {{"side", m_side}, {"p", m_p}, {"x", m_x}};
      } else if (m_l > 0 || m_w > 0) {
        cfg["strip"] = {{"L", m_l}, {"W", m_w}, {"p", m_p}};
        if (lattice_opt->count()) cfg["strip"]["lattice_kind"] = m_lattice;
      } else {
        json lattice = {{"kind", m_lattice}, {"shape", m_shape}, {"nx", m_nx}, {"p", m_p}};
        if (m_ny > 0) lattice["ny"] = m_ny;
        cfg["lattice"] = lattice;
      }
      if (mc_n->count()) cfg["n_trials"] = n_trials;
    } else if (sub == enumerate) {
      cfg = {{"kind", "enumerate"}, {"graph_file", e_graph}, {"p", e_p}};
    } else if (sub == sle) {
      cfg = {{"kind", "sle"}, {"a", s_a}, {"b", s_b}, {"kappa", s_kappa}};
      if (sle_dt0->count()) cfg["dt0"] = s_dt0;
      if (sle_eps->count()) cfg["eps_swallow"] = s_eps;
      if (sle_tmax->count()) cfg["t_max"] = s_tmax;
      if (sle_cgap->count()) cfg["c_gap"] = s_cgap;
      if (s_fixed) cfg["adaptive"] = false;
      if (sle_n->count()) cfg["n_trials"] = n_trials;
    }
    if (!cfg.is_object()) throw perc::cli::ConfigError("config: expected a JSON object");

    if (seed_opt->count()) cfg["master_seed"] = seed;
    if (!out_path.empty() || format_opt->count()) {
      json output = cfg.contains("output") ? cfg["output"] : json::object();
      if (!out_path.empty()) output["path"] = out_path;
      if (format_opt->count()) output["format"] = format;
      cfg["output"] = output;
    }
    perc::cli::ExperimentConfig config = perc::cli::parse_config(cfg);
    if (auto env = perc::cli::workers_from_environment()) config.workers = *env;
    if (workers_opt->count()) config.workers = workers;

    if (config.output.path.empty()) return perc::cli::run_config(config, std::cout);
    std::ofstream out(config.output.path, std::ios::binary);
    if (!out) throw perc::cli::ConfigError("cannot open output file '" + config.output.path + "'");
    return perc::cli::run_config(config, out);
  } catch (const perc::cli::ConfigError& e) {
    std::cerr << "percolab: " << e.what() << '\n';
    return perc::cli::kConfigError;
  } catch (const perc::InvalidInput& e) {
    std::cerr << "percolab: " << e.what() << '\n';
    return perc::cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "percolab: run failed: " << e.what() << '\n';
    return perc::cli::kCheckFailed;
  }
}
