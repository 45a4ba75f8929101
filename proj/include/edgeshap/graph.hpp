#pragma once

#include "edgeshap/coalition.hpp"

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace edgeshap {

/// Node label, unique within a graph.
class NodeId {
 public:
  NodeId() = default;
  explicit NodeId(std::string label);

  const std::string& label() const { return label_; }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;

 private:
  std::string label_;
};

/// Directed, cost-weighted edge. Containment and adjacency ignore direction.
struct Edge {
  NodeId from;
  NodeId to;
  double cost = 0.0;
};

/// A supply or contract route: a node set with a quantity.
struct Route {
  std::vector<NodeId> nodes;
  double quantity = 0.0;
};

/// Subset of a graph's edges, indexed by edge position.
using EdgeSet = boost::dynamic_bitset<std::uint64_t>;

/// Immutable graph. Node order is the canonical order for every output.
///
/// Construction validates: unique non-empty labels, at most kMaxPlayers
/// nodes, known endpoints, no self-loops, non-negative finite costs and at
/// most one edge per unordered endpoint pair. Violations throw
/// ValidationError.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<NodeId> nodes, std::vector<Edge> edges);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const NodeId& node(std::size_t i) const { return nodes_.at(i); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  Coalition all() const { return Coalition::full(nodes_.size()); }

  std::optional<std::size_t> find_node(const NodeId& id) const;
  /// Throws LookupError naming the node.
  std::size_t index_of(const NodeId& id) const;
  /// Edge joining a and b in either orientation.
  std::optional<std::size_t> find_edge(const NodeId& a, const NodeId& b) const;
  std::size_t edge_index(const NodeId& a, const NodeId& b) const;

  /// Nodes sharing an edge with i, either orientation.
  Coalition adjacency(std::size_t i) const { return Coalition(adjacency_.at(i)); }
  /// The two endpoints of edge e.
  Coalition endpoints(std::size_t e) const { return Coalition(endpoint_masks_.at(e)); }
  std::size_t from_index(std::size_t e) const { return from_.at(e); }
  std::size_t to_index(std::size_t e) const { return to_.at(e); }

  /// Mask of the given labels. Throws LookupError.
  Coalition mask_of(std::span<const NodeId> ids) const;
  std::vector<NodeId> labels_of(Coalition members) const;

  Graph without_edge(std::size_t e) const;
  Graph without_node(std::size_t i) const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::uint64_t> adjacency_;
  std::vector<std::uint64_t> endpoint_masks_;
  std::vector<std::size_t> from_;
  std::vector<std::size_t> to_;
};

std::vector<NodeId> neighborhood(const Graph& g, const NodeId& u);

/// Edges with both endpoints in s.
EdgeSet induced_edges(const Graph& g, Coalition s);
EdgeSet induced_edges(const Graph& g, std::span<const NodeId> s);

/// Union of the endpoints of every edge in f.
Coalition endpoint_union(const Graph& g, const EdgeSet& f);

/// Components of g, ignoring direction, singletons included, ordered by
/// smallest member.
std::vector<Coalition> connected_components(const Graph& g);
/// Components of the subgraph induced by `within`.
std::vector<Coalition> connected_components(const Graph& g, Coalition within);
/// Node sets of the connected groups formed by the edges of f alone.
std::vector<Coalition> edge_components(const Graph& g, const EdgeSet& f);

/// Validates a route against g and returns its node mask. Throws
/// LookupError, ValidationError or DegenerateRouteError.
Coalition route_mask(const Graph& g, const Route& r);
/// Edge set traversed by a route: the edges induced by its node set.
EdgeSet route_edges(const Graph& g, const Route& r);
/// Total cost of route_edges.
double route_cost(const Graph& g, const Route& r);

}  // namespace edgeshap
