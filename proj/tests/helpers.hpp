#pragma once

#include "edgeshap/scenario.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace edgeshap::testing {

inline std::filesystem::path fixture_dir() { return EDGESHAP_FIXTURE_DIR; }

inline Scenario fixture(const std::string& name) { return load_scenario_file(fixture_dir() / (name + ".json")); }

inline std::vector<NodeId> ids(std::initializer_list<const char*> labels) {
  std::vector<NodeId> out;
  for (const char* l : labels) out.emplace_back(l);
  return out;
}

/// Graph over nodes "0".."n-1" (or given labels) from index pairs.
inline Graph indexed_graph(unsigned n, const std::vector<std::pair<unsigned, unsigned>>& edges, double cost = 1.0) {
  std::vector<NodeId> nodes;
  for (unsigned i = 0; i < n; ++i) nodes.emplace_back(std::to_string(i));
  std::vector<Edge> list;
  for (auto [a, b] : edges) list.push_back({nodes[a], nodes[b], cost});
  return Graph(nodes, list);
}

/// The two-component graph with edges (A,D), (B,D), (C,E).
inline Graph h_graph() {
  const auto n = ids({"A", "B", "C", "D", "E"});
  return Graph(n, {{n[0], n[3], 1.0}, {n[1], n[3], 1.0}, {n[2], n[4], 1.0}});
}

inline EdgeGame<Rational> h_game() { return EdgeGame<Rational>(h_graph(), power_weight_fn(2)); }

template <class Scalar>
std::vector<Scalar> to_vector(const Allocation<Scalar>& a) {
  return std::vector<Scalar>(a.data(), a.data() + a.size());
}

inline std::vector<Rational> rationals(std::initializer_list<const char*> values) {
  std::vector<Rational> out;
  for (const char* v : values) out.push_back(parse_rational(v));
  return out;
}

/// Edge game with an arbitrary integer value for every edge subset.
inline EdgeGame<Rational> random_table_game(const Graph& g, std::mt19937_64& rng, int lo = -10, int hi = 20) {
  std::uniform_int_distribution<int> dist(lo, hi);
  auto table = std::make_shared<std::vector<Rational>>(std::size_t{1} << g.edge_count());
  for (std::size_t f = 1; f < table->size(); ++f) (*table)[f] = dist(rng);
  return EdgeGame<Rational>(
      g, EdgeCharacteristic<Rational>([table](const EdgeSet& f) { return (*table)[f.to_ulong()]; }, g.edge_count()));
}

/// Node set of a random connected subgraph with at least two nodes, grown
/// from a random start node. The graph must have an edge.
inline std::vector<NodeId> random_route_nodes(const Graph& g, std::mt19937_64& rng, std::size_t max_size) {
  std::size_t start = 0;
  do {
    start = rng() % g.node_count();
  } while (g.adjacency(start).empty());
  Coalition members = Coalition::singleton(start);
  const std::size_t target = 2 + rng() % std::max<std::size_t>(1, max_size - 1);
  while (members.size() < target) {
    Coalition frontier;
    members.for_each([&](std::size_t i) { frontier = frontier | g.adjacency(i); });
    frontier = frontier - members;
    if (frontier.empty()) break;
    std::vector<std::size_t> options;
    frontier.for_each([&](std::size_t i) { options.push_back(i); });
    members = members.with(options[rng() % options.size()]);
  }
  return g.labels_of(members);
}

}  // namespace edgeshap::testing
