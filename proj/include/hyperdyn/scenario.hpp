#pragma once

#include "hyperdyn/builtins.hpp"
#include "hyperdyn/checkers.hpp"
#include "hyperdyn/continuum.hpp"
#include "hyperdyn/pl_map.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperdyn {

using Json = nlohmann::json;

struct Analysis {
  std::string kind;
  /// Raw values: rationals "p/q", integers, lists "[a, b]", continuum literals
  /// or `@name` references, points `edge:t`.
  std::map<std::string, std::string> params;

  friend bool operator==(const Analysis&, const Analysis&) = default;
};

struct Scenario {
  std::string name;
  std::string graph;  // graph file; empty with a builtin map
  std::string map;    // map file or `builtin:<spec>`
  std::uint64_t seed = 1;
  std::string report;
  std::string csv_dir;
  std::vector<std::pair<std::string, std::string>> continua;  // name, literal
  std::vector<Analysis> analyses;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::vector<std::string> analysis_kinds();

/// Throws ParseError with line and column for malformed input, ValidationError
/// for unknown kinds, unknown parameters or out-of-range values.
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& s);

/// Graph, map and named continua a scenario runs against.
struct System {
  std::shared_ptr<const Graph> graph;
  PLMap map;
  std::vector<PointOnGraph> markov_seeds;
  std::map<std::string, Continuum> continua;
  std::string source;  // builtin spec or map file
  bool approximate = false;
};

/// Relative file names are resolved against `base_dir`.
System load_system(const Scenario& s, const std::filesystem::path& base_dir);

struct RunOptions {
  std::filesystem::path base_dir = ".";
  std::optional<std::uint64_t> seed_override;
  unsigned jobs = 1;
};

struct RunResult {
  Json report;
  std::size_t failures = 0;
};

/// Runs every analysis; the report is a pure function of the scenario and seed.
RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

/// Writes the report (and CSV files when the scenario names a directory),
/// each through a temporary file and a rename.
void write_outputs(const Scenario& s, const RunResult& r, const std::filesystem::path& base_dir);

/// Orbit tables (n, diameter, dist_H to the limit) per analysis and a table of
/// check outcomes; rationals appear exactly and as decimals.
void export_plot_data(const Json& report, const std::filesystem::path& csv_dir);

/// A theorem suite over `count` random Markov tree maps: "period-bound",
/// "nesting" or "recurrence".
RunResult run_random_suite(const std::string& suite, std::size_t count, std::uint64_t seed, std::size_t horizon);

Json outcome_json(const CheckOutcome& o);

}  // namespace hyperdyn
