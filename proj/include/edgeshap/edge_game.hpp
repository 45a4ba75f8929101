#pragma once

#include "edgeshap/game.hpp"

#include <memory>
#include <optional>
#include <random>

namespace edgeshap {

/// A characteristic function on subsets of a graph's edges.
///
/// Builders that are tied to a particular graph record its edge count so an
/// EdgeGame can reject a mismatched pairing; graph-agnostic functions (such
/// as |F|^k) leave it unset.
template <class Scalar>
class EdgeCharacteristic {
 public:
  using Function = std::function<Scalar(const EdgeSet&)>;

  explicit EdgeCharacteristic(Function f, std::optional<std::size_t> universe = std::nullopt)
      : f_(std::move(f)), universe_(universe) {}

  Scalar operator()(const EdgeSet& edges) const { return f_(edges); }
  std::optional<std::size_t> universe_size() const { return universe_; }

 private:
  Function f_;
  std::optional<std::size_t> universe_;
};

/// Graph plus edge-domain characteristic function.
template <class Scalar>
class EdgeGame {
 public:
  EdgeGame(Graph graph, EdgeCharacteristic<Scalar> w)
      : graph_(std::make_shared<const Graph>(std::move(graph))), w_(std::move(w)) {
    if (w_.universe_size() && *w_.universe_size() != graph_->edge_count()) {
      throw ArgumentError("characteristic is defined over " + std::to_string(*w_.universe_size()) +
                          " edges but the graph has " + std::to_string(graph_->edge_count()));
    }
    if (w_(EdgeSet(graph_->edge_count())) != Scalar(0)) {
      throw ContractViolation("edge characteristic is non-zero on the empty edge set");
    }
  }

  const Graph& graph() const { return *graph_; }
  const EdgeCharacteristic<Scalar>& characteristic() const { return w_; }
  std::shared_ptr<const Graph> shared_graph() const { return graph_; }

 private:
  std::shared_ptr<const Graph> graph_;
  EdgeCharacteristic<Scalar> w_;
};

/// Node game w^N(S) = w(edges with both endpoints in S).
template <class Scalar>
NodeCharacteristic<Scalar> lift(const EdgeGame<Scalar>& eg) {
  return NodeCharacteristic<Scalar>(eg.graph().node_count(),
                                    [graph = eg.shared_graph(), w = eg.characteristic()](Coalition s) {
                                      return w(induced_edges(*graph, s));
                                    });
}

/// Edge-based Shapley value: the Shapley value of the lifted game.
template <class Scalar>
Allocation<Scalar> edge_shapley(const EdgeGame<Scalar>& eg, const EngineOptions& options = {},
                                EngineStats* stats = nullptr) {
  return shapley_exact(lift(eg), options, stats);
}

/// Edge-based Shapley value, skipping coalitions that contain no neighbour
/// of the player. Adding a player with no neighbour in S adds no edge, so
/// every skipped marginal is zero and the result equals edge_shapley.
/// Marginals are evaluated directly (two lifted evaluations each) and summed
/// in the same ascending mask order as shapley_exact, so the result is
/// bit-identical to edge_shapley in floating point too. A player with an
/// empty neighbourhood costs nothing.
template <class Scalar>
Allocation<Scalar> edge_shapley_pruned(const EdgeGame<Scalar>& eg, const EngineOptions& options = {},
                                       EngineStats* stats = nullptr) {
  const Graph& g = eg.graph();
  const std::size_t n = g.node_count();
  detail::check_exact_capacity(n, options);
  const NodeCharacteristic<Scalar> v = lift(eg);
  const std::vector<Scalar> weights = detail::converted_weights<Scalar>(n);
  Allocation<Scalar> result = Allocation<Scalar>::Zero(static_cast<Eigen::Index>(n));
  std::vector<std::uint64_t> marginal_counts(n, 0);

  detail::parallel_for(n, options.threads, [&](std::size_t i) {
    const std::uint64_t neighbours = g.adjacency(i).bits();
    const std::uint64_t pool = g.all().without(i).bits();
    std::vector<Scalar> by_size(n, Scalar(0));
    std::uint64_t count = 0;
    if (neighbours != 0) {
      // Ascending submasks of pool; only those touching a neighbour are evaluated.
      std::uint64_t bits = 0;
      do {
        if (bits & neighbours) {
          const Coalition s(bits);
          const Scalar marginal = v(s.with(i)) - v(s);
          if (marginal != Scalar(0)) by_size[s.size()] += marginal;
          ++count;
        }
        bits = (bits - pool) & pool;
      } while (bits != 0);
    }
    result(static_cast<Eigen::Index>(i)) = detail::weigh_by_size(by_size, weights);
    marginal_counts[i] = count;
  });

  if (stats) {
    for (std::uint64_t c : marginal_counts) {
      stats->marginals += c;
      stats->evaluations += 2 * c;
    }
  }
  return result;
}

/// Comparison of the neighbourhood-restricted sum
///   sum over S within Gamma(i) of s!(n-s-1)!/n! (w^N(S+i) - w^N(S))
/// against the full edge-based Shapley value. The restricted sum omits
/// coalitions that mix neighbours with non-neighbours and generally
/// disagrees; it is kept for diagnostics only.
template <class Scalar>
struct RestrictedSumDiagnostic {
  Allocation<Scalar> restricted;
  Allocation<Scalar> reference;
  std::vector<bool> agrees;

  bool all_agree() const {
    for (bool a : agrees) {
      if (!a) return false;
    }
    return true;
  }
};

template <class Scalar>
RestrictedSumDiagnostic<Scalar> restricted_sum_diagnostic(const EdgeGame<Scalar>& eg, const EngineOptions& options = {},
                                                          double tolerance = 1e-9) {
  const Graph& g = eg.graph();
  const std::size_t n = g.node_count();
  const NodeCharacteristic<Scalar> v = lift(eg);
  const std::vector<Scalar> weights = detail::converted_weights<Scalar>(n);
  RestrictedSumDiagnostic<Scalar> out{Allocation<Scalar>::Zero(static_cast<Eigen::Index>(n)),
                                      edge_shapley(eg, options), {}};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t gamma = g.adjacency(i).bits();
    Scalar total(0);
    std::uint64_t s = 0;
    do {
      const Coalition c(s);
      total += weights[c.size()] * Scalar(v(c.with(i)) - v(c));
      s = (s - gamma) & gamma;
    } while (s != 0);
    const auto idx = static_cast<Eigen::Index>(i);
    out.restricted(idx) = total;
    out.agrees.push_back(ScalarTraits<Scalar>::equal(total, out.reference(idx), tolerance));
  }
  return out;
}

/// Edge game whose lift equals the component-restricted game of gg:
/// w(F) = sum of v over the node sets of the connected groups formed by F.
/// Requires v({i}) = 0 for every i, since a lift is always zero on
/// singletons; throws ContractViolation naming the first offending node.
template <class Scalar>
EdgeGame<Scalar> myerson_bridge(const GraphGame<Scalar>& gg) {
  const Graph& g = gg.graph;
  if (gg.v.player_count() != g.node_count()) throw ArgumentError("game and graph sizes differ");
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const Scalar worth = gg.v(Coalition::singleton(i));
    if (worth != Scalar(0)) {
      throw ContractViolation("game is not zero-normalized: v({" + g.node(i).label() + "}) = " + value_string(worth));
    }
  }
  auto graph = std::make_shared<const Graph>(g);
  EdgeCharacteristic<Scalar> w(
      [graph, v = gg.v](const EdgeSet& f) {
        Scalar total(0);
        for (Coalition group : edge_components(*graph, f)) total += v(group);
        return total;
      },
      g.edge_count());
  return EdgeGame<Scalar>(g, std::move(w));
}

/// The game with edge e removed: graph (N, E - e) and F -> w(F - e).
template <class Scalar>
EdgeGame<Scalar> delete_edge(const EdgeGame<Scalar>& eg, std::size_t e) {
  const Graph& g = eg.graph();
  if (e >= g.edge_count()) throw LookupError("edge index " + std::to_string(e) + " out of range");
  const std::size_t original_edges = g.edge_count();
  EdgeCharacteristic<Scalar> restricted(
      [w = eg.characteristic(), e, original_edges](const EdgeSet& f) {
        EdgeSet original(original_edges);
        for (auto k = f.find_first(); k != EdgeSet::npos; k = f.find_next(k)) original.set(k < e ? k : k + 1);
        return w(original);
      },
      original_edges - 1);
  return EdgeGame<Scalar>(g.without_edge(e), std::move(restricted));
}

template <class Scalar>
EdgeGame<Scalar> delete_edge(const EdgeGame<Scalar>& eg, const NodeId& a, const NodeId& b) {
  return delete_edge(eg, eg.graph().edge_index(a, b));
}

/// Change in each endpoint's edge-based Shapley value when an edge is
/// deleted. The two deltas are always equal.
template <class Scalar>
struct FairnessDelta {
  std::size_t from = 0;
  std::size_t to = 0;
  Scalar from_delta;
  Scalar to_delta;
};

template <class Scalar>
FairnessDelta<Scalar> fairness_delta(const EdgeGame<Scalar>& eg, std::size_t e, const EngineOptions& options = {}) {
  if (e >= eg.graph().edge_count()) throw LookupError("edge index " + std::to_string(e) + " out of range");
  const Allocation<Scalar> before = edge_shapley(eg, options);
  const Allocation<Scalar> after = edge_shapley(delete_edge(eg, e), options);
  FairnessDelta<Scalar> out;
  out.from = eg.graph().from_index(e);
  out.to = eg.graph().to_index(e);
  out.from_delta = before(static_cast<Eigen::Index>(out.from)) - after(static_cast<Eigen::Index>(out.from));
  out.to_delta = before(static_cast<Eigen::Index>(out.to)) - after(static_cast<Eigen::Index>(out.to));
  return out;
}

template <class Scalar>
FairnessDelta<Scalar> fairness_delta(const EdgeGame<Scalar>& eg, const NodeId& a, const NodeId& b,
                                     const EngineOptions& options = {}) {
  return fairness_delta(eg, eg.graph().edge_index(a, b), options);
}

template <class Scalar>
struct ComponentEntry {
  Coalition members;
  Scalar allocated;
  Scalar worth;
  bool matches = false;
};

/// Per-component comparison of allocated value against component worth.
///
/// Two additivity flags accompany it. `additive_on_disjoint` is the
/// hypothesis w^N(S u T) = w^N(S) + w^N(T) for all disjoint S, T; it forces
/// w^N to vanish on every edge pair and so only holds for the zero game.
/// `additive_when_separated` restricts it to disjoint S, T with no edge
/// between them, which is what component efficiency actually needs.
template <class Scalar>
struct ComponentEfficiencyReport {
  std::vector<ComponentEntry<Scalar>> components;
  bool additive_on_disjoint = true;
  bool additive_when_separated = true;
  bool exhaustive = true;
  std::uint64_t pairs_checked = 0;
  std::optional<std::pair<Coalition, Coalition>> disjoint_witness;
  std::optional<std::pair<Coalition, Coalition>> separated_witness;

  bool all_match() const {
    for (const auto& c : components) {
      if (!c.matches) return false;
    }
    return true;
  }
};

struct ComponentCheckOptions {
  double tolerance = 1e-9;
  /// Disjoint pairs are enumerated exhaustively up to this many players and
  /// sampled above it.
  std::size_t exhaustive_limit = 10;
  std::size_t sampled_pairs = 4096;
  std::uint64_t seed = 1;
  EngineOptions engine;
};

template <class Scalar>
ComponentEfficiencyReport<Scalar> component_efficiency_check(const EdgeGame<Scalar>& eg,
                                                             const Allocation<Scalar>& allocation,
                                                             const ComponentCheckOptions& options = {}) {
  using Traits = ScalarTraits<Scalar>;
  const Graph& g = eg.graph();
  const std::size_t n = g.node_count();
  const NodeCharacteristic<Scalar> v = lift(eg);
  ComponentEfficiencyReport<Scalar> report;

  for (Coalition component : connected_components(g)) {
    ComponentEntry<Scalar> entry{component, Scalar(0), v(component), false};
    component.for_each([&](std::size_t i) { entry.allocated += allocation(static_cast<Eigen::Index>(i)); });
    entry.matches = Traits::equal(entry.allocated, entry.worth, options.tolerance);
    report.components.push_back(std::move(entry));
  }

  auto separated = [&](Coalition s, Coalition t) {
    Coalition reach;
    s.for_each([&](std::size_t i) { reach = reach | g.adjacency(i); });
    return !reach.intersects(t);
  };
  auto examine = [&](Coalition s, Coalition t, const Scalar& vs, const Scalar& vt, const Scalar& vst) {
    ++report.pairs_checked;
    if (Traits::equal(vst, Scalar(vs + vt), options.tolerance)) return;
    if (report.additive_on_disjoint) {
      report.additive_on_disjoint = false;
      report.disjoint_witness = std::make_pair(s, t);
    }
    if (report.additive_when_separated && separated(s, t)) {
      report.additive_when_separated = false;
      report.separated_witness = std::make_pair(s, t);
    }
  };

  if (n <= options.exhaustive_limit) {
    const std::vector<Scalar> table = tabulate(v, options.engine);
    const std::uint64_t full = g.all().bits();
    for (std::uint64_t s = 0; s <= full; ++s) {
      const std::uint64_t rest = full & ~s;
      std::uint64_t t = 0;
      do {
        examine(Coalition(s), Coalition(t), table[s], table[t], table[s | t]);
        t = (t - rest) & rest;
      } while (t != 0);
    }
  } else {
    report.exhaustive = false;
    std::mt19937_64 rng(options.seed);
    for (std::size_t k = 0; k < options.sampled_pairs; ++k) {
      Coalition s, t;
      for (std::size_t i = 0; i < n; ++i) {
        switch (detail::bounded_draw(rng, 3)) {
          case 0: s = s.with(i); break;
          case 1: t = t.with(i); break;
          default: break;
        }
      }
      examine(s, t, v(s), v(t), v(s | t));
    }
  }
  return report;
}

template <class Scalar>
ComponentEfficiencyReport<Scalar> component_efficiency_check(const EdgeGame<Scalar>& eg,
                                                             const ComponentCheckOptions& options = {}) {
  return component_efficiency_check(eg, edge_shapley(eg, options.engine), options);
}

}  // namespace edgeshap
