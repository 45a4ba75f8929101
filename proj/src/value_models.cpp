#include "edgeshap/value_models.hpp"

#include <cmath>
#include <memory>

namespace edgeshap {

namespace {

void check_alpha(const CostDecayParams& params) {
  if (!(params.alpha > 0.0) || !std::isfinite(params.alpha)) throw ArgumentError("alpha must be a positive finite number");
}

bool matches(const EdgeSet& route_edges, const EdgeSet& f, IndicatorSemantics semantics) {
  return semantics == IndicatorSemantics::containment ? route_edges.is_subset_of(f) : route_edges == f;
}

template <class Scalar>
struct MatchedRoute {
  EdgeSet edges;
  Scalar value;
};

template <class Scalar>
EdgeCharacteristic<Scalar> route_sum(std::vector<MatchedRoute<Scalar>> routes, std::size_t edge_count,
                                     IndicatorSemantics semantics) {
  auto shared = std::make_shared<const std::vector<MatchedRoute<Scalar>>>(std::move(routes));
  return EdgeCharacteristic<Scalar>(
      [shared, semantics](const EdgeSet& f) {
        Scalar total(0);
        for (const auto& r : *shared) {
          if (matches(r.edges, f, semantics)) total += r.value;
        }
        return total;
      },
      edge_count);
}

}  // namespace

RouteValue route_value(const Graph& g, const Route& r, const CostDecayParams& params) {
  check_alpha(params);
  const double cost = route_cost(g, r);
  return RouteValue{r, cost, r.quantity * std::exp(-params.alpha * cost)};
}

EdgeCharacteristic<double> supply_weight_fn(const Graph& g, std::span<const Route> routes,
                                            const CostDecayParams& params) {
  check_alpha(params);
  std::vector<MatchedRoute<double>> matched;
  for (const Route& r : routes) matched.push_back({route_edges(g, r), route_value(g, r, params).decayed_value});
  return route_sum(std::move(matched), g.edge_count(), params.semantics);
}

EdgeCharacteristic<Rational> contract_weight_fn(const Graph& g, const ContractRouteTable& table,
                                                IndicatorSemantics semantics) {
  std::vector<MatchedRoute<Rational>> matched;
  for (const ContractRoute& r : table) {
    if (r.contracts < 0 || denominator(r.contracts) != 1) {
      throw ValidationError("contract count must be a non-negative integer, got " + to_string(r.contracts));
    }
    matched.push_back({route_edges(g, Route{r.nodes, 0.0}), r.contracts});
  }
  return route_sum(std::move(matched), g.edge_count(), semantics);
}

EdgeCharacteristic<Rational> power_weight_fn(unsigned exponent) {
  if (exponent == 0) throw ArgumentError("exponent must be at least 1");
  return EdgeCharacteristic<Rational>([exponent](const EdgeSet& f) {
    return Rational(boost::multiprecision::pow(BigInt(f.count()), exponent));
  });
}

namespace detail {

Coalition closed_form_route_mask(const Graph& g, std::span<const NodeId> nodes) {
  const Route route{std::vector<NodeId>(nodes.begin(), nodes.end()), 0.0};
  const Coalition members = route_mask(g, route);
  const Coalition covered = endpoint_union(g, route_edges(g, route));
  if (covered != members) {
    const auto idle = g.labels_of(members - covered);
    throw ContractViolation("route node '" + idle.front().label() +
                            "' has no incident edge inside the route; closed form does not apply");
  }
  return members;
}

}  // namespace detail

std::vector<WeightedRoute<double>> decayed_routes(const Graph& g, std::span<const Route> routes,
                                                  const CostDecayParams& params) {
  std::vector<WeightedRoute<double>> out;
  for (const Route& r : routes) out.push_back({r.nodes, route_value(g, r, params).decayed_value});
  return out;
}

std::vector<WeightedRoute<Rational>> contract_routes(const ContractRouteTable& table) {
  std::vector<WeightedRoute<Rational>> out;
  for (const ContractRoute& r : table) out.push_back({r.nodes, r.contracts});
  return out;
}

}  // namespace edgeshap
