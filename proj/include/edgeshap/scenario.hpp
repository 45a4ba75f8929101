#pragma once

#include "edgeshap/axioms.hpp"
#include "edgeshap/value_models.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace edgeshap {

enum class Domain { exact, approx };

struct SupplyModel {
  CostDecayParams params;
};

struct ContractModel {
  IndicatorSemantics semantics = IndicatorSemantics::containment;
};

struct PowerModel {
  unsigned exponent = 2;
};

struct TableEntry {
  std::vector<std::pair<NodeId, NodeId>> edges;
  Rational value;
};

/// Explicit value table over edge subsets; unlisted subsets are worth 0.
struct ExplicitTableModel {
  std::vector<TableEntry> table;
};

using Model = std::variant<SupplyModel, ContractModel, PowerModel, ExplicitTableModel>;

/// A validated, self-contained game description.
struct Scenario {
  std::string name;
  Graph graph;
  Model model;
  std::vector<Route> routes;
  Domain domain = Domain::exact;
  /// Expected allocation as written in the document, in node order. Empty
  /// when the document has none.
  std::vector<std::pair<NodeId, std::string>> expected;
  /// Free-form provenance. `"regression": "skip"` disables expected-vector
  /// regression for the scenario.
  nlohmann::json metadata = nlohmann::json::object();

  bool has_expected() const { return !expected.empty(); }
  bool regression_enabled() const;
  bool is_route_model() const {
    return std::holds_alternative<SupplyModel>(model) || std::holds_alternative<ContractModel>(model);
  }
};

std::string_view domain_name(Domain d);
std::string_view model_type_name(const Model& m);

/// Parses and validates a scenario document. Throws ParseError with a
/// 1-based line/column for syntax errors and ValidationError (message
/// prefixed with the JSON pointer of the offending field) for schema or
/// consistency errors.
Scenario load_scenario(std::string_view text, std::string name = {});
Scenario load_scenario_file(const std::filesystem::path& path);

nlohmann::json to_json(const Scenario& s);
std::string serialize_scenario(const Scenario& s);

/// Drops u, its incident edges, every route through u and every table entry
/// mentioning a dropped edge. Expected values are cleared.
Scenario remove_node(const Scenario& s, const NodeId& u);
/// Drops the edge joining a and b. Route and table entries that traverse it
/// are dropped too, which makes the result's game equal to delete_edge on
/// the original game.
Scenario remove_edge(const Scenario& s, const NodeId& a, const NodeId& b);

using AnyEdgeGame = std::variant<EdgeGame<Rational>, EdgeGame<double>>;

/// The edge game the scenario describes, in its declared domain.
AnyEdgeGame build_edge_game(const Scenario& s);
EdgeGame<Rational> build_exact_game(const Scenario& s);
EdgeGame<double> build_approx_game(const Scenario& s);

/// Route values for the closed form. Throws ArgumentError unless the model
/// is a containment-semantics route model.
std::vector<WeightedRoute<double>> closed_form_routes_approx(const Scenario& s);
std::vector<WeightedRoute<Rational>> closed_form_routes_exact(const Scenario& s);

ContractRouteTable contract_table(const Scenario& s);

/// Absolute tolerance for approx-domain expected vectors, matching
/// three-decimal rounding.
inline constexpr double kApproxRegressionTolerance = 2e-3;

/// Compares an allocation with the scenario's expected vector: exact
/// equality in the exact domain, kApproxRegressionTolerance otherwise.
CheckResult check_expected(const Scenario& s, const Allocation<Rational>& allocation);
CheckResult check_expected(const Scenario& s, const Allocation<double>& allocation);

/// Every *.json scenario in a directory, sorted by file name. Scenario
/// names default to the file stem.
std::vector<Scenario> load_fixture_set(const std::filesystem::path& directory);

}  // namespace edgeshap
