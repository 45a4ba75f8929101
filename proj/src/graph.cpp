#include "edgeshap/graph.hpp"

#include "edgeshap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace edgeshap {

NodeId::NodeId(std::string label) : label_(std::move(label)) {
  if (label_.empty()) throw ValidationError("node label must be non-empty");
}

Graph::Graph(std::vector<NodeId> nodes, std::vector<Edge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  if (nodes_.size() > kMaxPlayers) {
    throw CapacityError("graph has " + std::to_string(nodes_.size()) + " nodes; at most " +
                        std::to_string(kMaxPlayers) + " are supported");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].label().empty()) throw ValidationError("node label must be non-empty");
    if (!index_.emplace(nodes_[i].label(), i).second) {
      throw ValidationError("duplicate node '" + nodes_[i].label() + "'");
    }
  }
  adjacency_.assign(nodes_.size(), 0);
  for (const Edge& e : edges_) {
    const auto a = find_node(e.from);
    const auto b = find_node(e.to);
    if (!a) throw LookupError("edge endpoint '" + e.from.label() + "' is not a node");
    if (!b) throw LookupError("edge endpoint '" + e.to.label() + "' is not a node");
    if (*a == *b) throw ValidationError("self-loop on '" + e.from.label() + "'");
    if (!(e.cost >= 0.0) || !std::isfinite(e.cost)) {
      throw ValidationError("edge (" + e.from.label() + "," + e.to.label() + ") has invalid cost");
    }
    const std::uint64_t mask = (std::uint64_t{1} << *a) | (std::uint64_t{1} << *b);
    if (std::find(endpoint_masks_.begin(), endpoint_masks_.end(), mask) != endpoint_masks_.end()) {
      throw ValidationError("duplicate edge between '" + e.from.label() + "' and '" + e.to.label() + "'");
    }
    endpoint_masks_.push_back(mask);
    from_.push_back(*a);
    to_.push_back(*b);
    adjacency_[*a] |= std::uint64_t{1} << *b;
    adjacency_[*b] |= std::uint64_t{1} << *a;
  }
}

std::optional<std::size_t> Graph::find_node(const NodeId& id) const {
  const auto it = index_.find(id.label());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Graph::index_of(const NodeId& id) const {
  if (const auto i = find_node(id)) return *i;
  throw LookupError("unknown node '" + id.label() + "'");
}

std::optional<std::size_t> Graph::find_edge(const NodeId& a, const NodeId& b) const {
  const auto ia = find_node(a);
  const auto ib = find_node(b);
  if (!ia || !ib || *ia == *ib) return std::nullopt;
  const std::uint64_t mask = (std::uint64_t{1} << *ia) | (std::uint64_t{1} << *ib);
  const auto it = std::find(endpoint_masks_.begin(), endpoint_masks_.end(), mask);
  if (it == endpoint_masks_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - endpoint_masks_.begin());
}

std::size_t Graph::edge_index(const NodeId& a, const NodeId& b) const {
  index_of(a);
  index_of(b);
  if (const auto e = find_edge(a, b)) return *e;
  throw LookupError("no edge between '" + a.label() + "' and '" + b.label() + "'");
}

Coalition Graph::mask_of(std::span<const NodeId> ids) const {
  Coalition mask;
  for (const NodeId& id : ids) mask = mask.with(index_of(id));
  return mask;
}

std::vector<NodeId> Graph::labels_of(Coalition members) const {
  std::vector<NodeId> out;
  members.for_each([&](std::size_t i) { out.push_back(nodes_.at(i)); });
  return out;
}

Graph Graph::without_edge(std::size_t e) const {
  std::vector<Edge> kept = edges_;
  kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(e));
  return Graph(nodes_, std::move(kept));
}

Graph Graph::without_node(std::size_t i) const {
  std::vector<NodeId> kept_nodes = nodes_;
  kept_nodes.erase(kept_nodes.begin() + static_cast<std::ptrdiff_t>(i));
  std::vector<Edge> kept_edges;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!endpoints(e).contains(i)) kept_edges.push_back(edges_[e]);
  }
  return Graph(std::move(kept_nodes), std::move(kept_edges));
}

std::vector<NodeId> neighborhood(const Graph& g, const NodeId& u) {
  return g.labels_of(g.adjacency(g.index_of(u)));
}

EdgeSet induced_edges(const Graph& g, Coalition s) {
  EdgeSet out(g.edge_count());
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (g.endpoints(e).is_subset_of(s)) out.set(e);
  }
  return out;
}

EdgeSet induced_edges(const Graph& g, std::span<const NodeId> s) { return induced_edges(g, g.mask_of(s)); }

Coalition endpoint_union(const Graph& g, const EdgeSet& f) {
  Coalition out;
  for (auto e = f.find_first(); e != EdgeSet::npos; e = f.find_next(e)) out = out | g.endpoints(e);
  return out;
}

std::vector<Coalition> connected_components(const Graph& g) { return connected_components(g, g.all()); }

std::vector<Coalition> connected_components(const Graph& g, Coalition within) {
  std::vector<Coalition> out;
  Coalition remaining = within;
  while (!remaining.empty()) {
    const auto seed = static_cast<std::size_t>(std::countr_zero(remaining.bits()));
    Coalition component = Coalition::singleton(seed);
    Coalition frontier = component;
    while (!frontier.empty()) {
      Coalition next;
      frontier.for_each([&](std::size_t v) { next = next | g.adjacency(v); });
      next = (next & within) - component;
      component = component | next;
      frontier = next;
    }
    out.push_back(component);
    remaining = remaining - component;
  }
  return out;
}

std::vector<Coalition> edge_components(const Graph& g, const EdgeSet& f) {
  std::vector<std::size_t> parent(g.node_count());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  Coalition touched;
  for (auto e = f.find_first(); e != EdgeSet::npos; e = f.find_next(e)) {
    parent[find(g.from_index(e))] = find(g.to_index(e));
    touched = touched | g.endpoints(e);
  }
  std::vector<Coalition> out;
  std::vector<std::size_t> root_slot(g.node_count(), g.node_count());
  touched.for_each([&](std::size_t v) {
    const std::size_t r = find(v);
    if (root_slot[r] == g.node_count()) {
      root_slot[r] = out.size();
      out.emplace_back();
    }
    out[root_slot[r]] = out[root_slot[r]].with(v);
  });
  return out;
}

Coalition route_mask(const Graph& g, const Route& r) {
  if (!(r.quantity >= 0.0) || !std::isfinite(r.quantity)) throw ValidationError("route quantity must be >= 0");
  const Coalition mask = g.mask_of(r.nodes);
  if (mask.size() != r.nodes.size()) throw ValidationError("route lists a node more than once");
  if (mask.size() < 2) throw ValidationError("route must contain at least two nodes");
  return mask;
}

EdgeSet route_edges(const Graph& g, const Route& r) {
  EdgeSet edges = induced_edges(g, route_mask(g, r));
  if (edges.none()) {
    std::string names;
    for (const NodeId& id : r.nodes) names += (names.empty() ? "" : ",") + id.label();
    throw DegenerateRouteError("route {" + names + "} traverses no edge");
  }
  return edges;
}

double route_cost(const Graph& g, const Route& r) {
  const EdgeSet edges = route_edges(g, r);
  double total = 0.0;
  for (auto e = edges.find_first(); e != EdgeSet::npos; e = edges.find_next(e)) total += g.edge(e).cost;
  return total;
}

}  // namespace edgeshap
