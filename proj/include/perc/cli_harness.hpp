#pragma once

// Command-line front end: tables of formula values and measurements, JSON
// experiment configs and prediction-vs-measurement comparisons.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "perc/errors.hpp"
#include "perc/exact_enumeration.hpp"
#include "perc/lattice_mc.hpp"
#include "perc/sle_engine.hpp"

namespace perc::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

/// Config or argument problem, reported with exit code 2.
class ConfigError : public perc::InvalidInput {
 public:
  using perc::InvalidInput::InvalidInput;
};

enum class Format { csv, json };

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

struct Table {
  std::string kind;
  std::optional<std::uint64_t> master_seed;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// 17 significant digits; NaN as "nan".
std::string format_double(double v);

/// One "# percolab <kind> master_seed=<seed>" line, the header, then rows.
std::string to_csv(const Table& table);

/// {"kind", "master_seed", "columns", "rows": [{column: value}]}; NaN as null.
json to_json(const Table& table);

void write_table(const Table& table, Format format, std::ostream& out);

struct ComparisonRow {
  std::string label;
  std::string geometry;
  double predicted = 0.0;
  double measured = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double abs_error = 0.0;
  bool within_ci = false;
};

/// Fills abs_error and within_ci (predicted inside [ci_low, ci_high]).
ComparisonRow make_comparison(std::string label, std::string geometry, double predicted, double measured,
                              double ci_low, double ci_high);

json to_json(const ComparisonRow& row);
ComparisonRow comparison_from_json(const json& j);
Table comparison_table(const std::vector<ComparisonRow>& rows, std::optional<std::uint64_t> master_seed);

struct OutputSpec {
  std::string path;  // empty: stdout
  Format format = Format::csv;
};

/// A validated experiment description.  `params` holds the kind-specific
/// keys; every key has been checked against the schema for its kind.
struct ExperimentConfig {
  std::string kind;  // formula | geometry | mc | enumerate | sle | compare
  json params;
  OutputSpec output;
  std::uint64_t master_seed = 1;
  std::uint64_t n_trials = 1000;
  int workers = 1;
};

ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::string& path);

LatticeSpec lattice_spec_from_json(const json& j);
json to_json(const LatticeSpec& spec);
SmallGraph graph_from_json(const json& j);
json to_json(const SmallGraph& graph);
SmallGraph load_graph(const std::string& path);
SleParams sle_params_from_json(const json& j, double a, double b);

struct FormulaArgs {
  std::vector<double> eta;
  std::vector<double> rect_r;
  std::vector<double> triangle_x;
  std::vector<double> strip_ratio;
};

struct GeometryArgs {
  std::vector<double> r;
  std::vector<double> k;
  std::vector<double> x;
};

Table cmd_formula(const FormulaArgs& args);
Table cmd_geometry(const GeometryArgs& args);
Table cmd_mc(const LatticeSpec& spec, std::uint64_t n_trials, std::uint64_t master_seed, int workers);
Table cmd_smirnov(int side_sites, double p, const std::vector<double>& xs, std::uint64_t n_trials,
                  std::uint64_t master_seed, int workers);
Table cmd_strip(int l_sites, int w_sites, double p, LatticeKind kind, std::uint64_t n_trials,
                std::uint64_t master_seed, int workers);
Table cmd_enumerate(const SmallGraph& graph, double p, int workers);
Table cmd_sle(double a, double b, std::uint64_t n_traces, const SleParams& params, std::uint64_t master_seed,
              int workers);

struct CompareResult {
  std::vector<ComparisonRow> rows;
  bool all_within = true;
};

/// Runs every check of a compare config.  Rows completed before a failing
/// sub-run are handed to `on_row` as they finish, so they can be flushed.
CompareResult cmd_compare(const ExperimentConfig& config,
                          const std::function<void(const ComparisonRow&)>& on_row = {});

/// Executes a config and writes its table.  Returns the exit code.
int run_config(const ExperimentConfig& config, std::ostream& out);

/// Worker count from PERCOLAB_WORKERS, if set and valid.
std::optional<int> workers_from_environment();

}  // namespace perc::cli
