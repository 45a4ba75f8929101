#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace edgeshap {
namespace {

using testing::fixture;
using testing::rationals;
using testing::to_vector;

constexpr const char* kTwoNodeTable = R"({
  "name": "pair",
  "nodes": ["A", "B"],
  "edges": [{"from": "A", "to": "B", "cost": 1}],
  "model": {"type": "explicit_table", "table": [{"edges": [["A", "B"]], "value": "7/3"}]},
  "domain": "exact"
})";

std::string with_replacement(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  EXPECT_NE(at, std::string::npos) << from;
  return text.replace(at, from.size(), to);
}

void expect_validation_error(const std::string& text, const std::string& fragment) {
  try {
    load_scenario(text);
    ADD_FAILURE() << "expected ValidationError containing " << fragment;
  } catch (const ParseError& e) {
    ADD_FAILURE() << "unexpected parse error " << e.what();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(Fixtures, AllLoad) {
  const auto all = load_fixture_set(testing::fixture_dir());
  ASSERT_EQ(all.size(), 8U);
  for (const Scenario& s : all) EXPECT_FALSE(s.name.empty());
}

TEST(Fixtures, Shapes) {
  const Scenario h = fixture("counterexample-H");
  EXPECT_EQ(h.graph.node_count(), 5U);
  EXPECT_EQ(h.graph.edge_count(), 3U);
  EXPECT_EQ(h.domain, Domain::exact);
  EXPECT_TRUE(std::holds_alternative<PowerModel>(h.model));
  const Scenario phone = fixture("smartphone");
  EXPECT_EQ(phone.graph.node_count(), 20U);
  EXPECT_EQ(phone.graph.edge_count(), 23U);
  EXPECT_EQ(phone.routes.size(), 11U);
  EXPECT_FALSE(phone.has_expected());
  const Scenario platform = fixture("platform-two");
  EXPECT_FALSE(platform.regression_enabled());
  EXPECT_EQ(platform.metadata["efficiency_total"], 36);
}

TEST(Fixtures, ExpectedVectorsReproduce) {
  for (const Scenario& s : load_fixture_set(testing::fixture_dir())) {
    if (!s.has_expected() || !s.regression_enabled()) continue;
    SCOPED_TRACE(s.name);
    const CheckResult r = std::visit([&](const auto& game) { return check_expected(s, edge_shapley(game)); },
                                     build_edge_game(s));
    EXPECT_TRUE(r.passed) << r.detail;
    EXPECT_FALSE(r.informational);
  }
}

TEST(Fixtures, MismatchIsReported) {
  const Scenario h = fixture("counterexample-H");
  Allocation<Rational> wrong = edge_shapley(build_exact_game(h));
  wrong(0) += 1;
  const CheckResult r = check_expected(h, wrong);
  EXPECT_FALSE(r.passed);
  ASSERT_EQ(r.witnesses.size(), 1U);
  EXPECT_EQ(r.witnesses[0], "A: got 8/3, expected 5/3");
}

TEST(LoadScenario, MinimalExplicitTable) {
  const Scenario s = load_scenario(kTwoNodeTable);
  EXPECT_EQ(s.name, "pair");
  EXPECT_EQ(to_vector(edge_shapley(build_exact_game(s))), rationals({"7/6", "7/6"}));
}

TEST(LoadScenario, NameFallback) {
  const std::string text = with_replacement(kTwoNodeTable, R"("name": "pair",)", "");
  EXPECT_EQ(load_scenario(text, "fallback").name, "fallback");
}

TEST(LoadScenario, SyntaxErrorCarriesPosition) {
  const std::string text = "{\n  \"nodes\": [\"A\",\n  ]\n}";
  try {
    load_scenario(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3U);
    EXPECT_GE(e.column(), 1U);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(LoadScenario, ValidationErrorsCarryPointers) {
  const std::string base = kTwoNodeTable;
  expect_validation_error(with_replacement(base, R"("to": "B")", R"("to": "Z")"), "/edges/0/to: unknown node 'Z'");
  expect_validation_error(with_replacement(base, R"("cost": 1)", R"("cost": -1)"), "/edges/0/cost");
  expect_validation_error(with_replacement(base, R"("domain": "exact")", R"("domain": "approx")"), "/domain");
  expect_validation_error(with_replacement(base, R"("domain": "exact")", R"("domain": "exact", "extra": 1)"),
                          "unknown field \"extra\"");
  expect_validation_error(with_replacement(base, R"(["A", "B"])", R"(["A", "B", "A"])"), "/nodes/2: duplicate node");
  expect_validation_error(with_replacement(base, R"({"from": "A", "to": "B", "cost": 1})",
                                           R"({"from": "A", "to": "B", "cost": 1}, {"from": "B", "to": "A", "cost": 2})"),
                          "/edges/1: duplicate edge");
  expect_validation_error(with_replacement(base, R"("value": "7/3")", R"("value": "7/0")"), "/model/table/0/value");
  expect_validation_error(with_replacement(base, R"("explicit_table")", R"("mystery")"), "/model/type");
  expect_validation_error(with_replacement(base, R"("domain": "exact")", R"("domain": "exact", "routes": [{"nodes": ["A", "B"], "quantity": 1}])"),
                          "/routes");
  expect_validation_error(with_replacement(base, R"("domain": "exact")", R"("domain": "exact", "expected": {"A": "1"})"),
                          "missing value for node 'B'");
}

TEST(LoadScenario, ModelSpecificRules) {
  const std::string supply = R"({
    "nodes": ["A", "B"],
    "edges": [{"from": "A", "to": "B", "cost": 2}],
    "model": {"type": "supply_cost_decay", "alpha": 0.1},
    "routes": [{"nodes": ["A", "B"], "quantity": 3}],
    "domain": "approx"
  })";
  const Scenario s = load_scenario(supply);
  EXPECT_NEAR(edge_shapley(build_approx_game(s))(0), 1.5 * std::exp(-0.2), 1e-12);
  expect_validation_error(with_replacement(supply, R"("alpha": 0.1)", R"("alpha": 0)"), "/model/alpha");
  expect_validation_error(with_replacement(supply, R"("approx")", R"("exact")"), "requires the approx domain");
  const std::string contract = with_replacement(
      with_replacement(supply, R"("type": "supply_cost_decay", "alpha": 0.1)", R"("type": "contract")"),
      R"("approx")", R"("exact")");
  EXPECT_EQ(edge_shapley(build_exact_game(load_scenario(contract)))(1), Rational(3, 2));
  expect_validation_error(with_replacement(contract, R"("quantity": 3)", R"("quantity": 2.5)"),
                          "/routes/0/quantity");
}

TEST(LoadScenario, MissingFile) {
  EXPECT_THROW(load_scenario_file(testing::fixture_dir() / "does-not-exist.json"), LookupError);
}

TEST(Serialize, RoundTripsEveryFixture) {
  for (const Scenario& s : load_fixture_set(testing::fixture_dir())) {
    SCOPED_TRACE(s.name);
    const std::string text = serialize_scenario(s);
    const Scenario back = load_scenario(text);
    EXPECT_EQ(serialize_scenario(back), text);
    EXPECT_EQ(back.graph.node_count(), s.graph.node_count());
    EXPECT_EQ(back.routes.size(), s.routes.size());
    EXPECT_EQ(back.expected, s.expected);
  }
  const Scenario table = load_scenario(kTwoNodeTable);
  EXPECT_EQ(serialize_scenario(load_scenario(serialize_scenario(table))), serialize_scenario(table));
}

TEST(RemoveNode, ChainSuppliersWithoutA) {
  const Scenario s = remove_node(fixture("chain-suppliers"), NodeId("A"));
  EXPECT_EQ(s.graph.node_count(), 4U);
  EXPECT_EQ(s.graph.edge_count(), 3U);
  ASSERT_EQ(s.routes.size(), 1U);
  EXPECT_FALSE(s.has_expected());
  const auto eg = build_approx_game(s);
  EdgeSet all(s.graph.edge_count());
  all.set();
  EXPECT_NEAR(eg.characteristic()(all), 8 * std::exp(-0.3), 1e-12);
  const auto values = edge_shapley(eg);
  EXPECT_NEAR(values(0), 2 * std::exp(-0.3), 1e-12);
  EXPECT_NEAR(values.sum(), 5.926545765453743, 1e-12);
}

TEST(RemoveNode, LeavesNothingDangling) {
  for (const Scenario& s : load_fixture_set(testing::fixture_dir())) {
    for (const NodeId& u : s.graph.nodes()) {
      const Scenario reduced = remove_node(s, u);
      EXPECT_FALSE(reduced.graph.find_node(u).has_value());
      for (const Edge& e : reduced.graph.edges()) EXPECT_TRUE(e.from != u && e.to != u);
      for (const Route& r : reduced.routes) {
        for (const NodeId& id : r.nodes) EXPECT_TRUE(reduced.graph.find_node(id).has_value()) << id.label();
      }
      // The reduced scenario must reload cleanly.
      EXPECT_NO_THROW(load_scenario(serialize_scenario(reduced)));
    }
  }
}

TEST(RemoveNode, UnknownNode) {
  EXPECT_THROW(remove_node(fixture("chain-suppliers"), NodeId("Z")), LookupError);
}

TEST(RemoveEdge, MatchesDeleteEdgeGame) {
  for (const char* name : {"counterexample-H", "module-layers", "chain-suppliers", "platform-two"}) {
    SCOPED_TRACE(name);
    const Scenario s = fixture(name);
    for (const Edge& e : s.graph.edges()) {
      const Scenario reduced = remove_edge(s, e.from, e.to);
      EXPECT_EQ(reduced.graph.edge_count() + 1, s.graph.edge_count());
      std::visit(
          [&](const auto& game) {
            const auto expected = edge_shapley(delete_edge(game, e.from, e.to));
            using Scalar = typename std::decay_t<decltype(expected)>::Scalar;
            const auto got = edge_shapley(std::get<EdgeGame<Scalar>>(build_edge_game(reduced)));
            for (Eigen::Index i = 0; i < got.size(); ++i) {
              EXPECT_TRUE(ScalarTraits<Scalar>::equal(got(i), expected(i), 1e-12));
            }
          },
          build_edge_game(s));
    }
  }
}

TEST(RemoveEdge, PrunesTableEntries) {
  const std::string text = with_replacement(
      with_replacement(kTwoNodeTable, R"(["A", "B"],)", R"(["A", "B", "C"],)"),
      R"([{"from": "A", "to": "B", "cost": 1}])",
      R"([{"from": "A", "to": "B", "cost": 1}, {"from": "B", "to": "C", "cost": 1}])");
  const Scenario s = remove_edge(load_scenario(text), NodeId("B"), NodeId("A"));
  EXPECT_TRUE(std::get<ExplicitTableModel>(s.model).table.empty());
  EXPECT_THROW(remove_edge(s, NodeId("A"), NodeId("C")), LookupError);
}

}  // namespace
}  // namespace edgeshap
