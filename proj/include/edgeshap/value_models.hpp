#pragma once

#include "edgeshap/edge_game.hpp"

#include <span>
#include <vector>

namespace edgeshap {

/// How a route's edge set E_r is matched against an edge set F.
enum class IndicatorSemantics {
  containment,      ///< route counts when E_r is a subset of F
  strict_equality,  ///< route counts only when E_r equals F
};

struct CostDecayParams {
  double alpha = 0.1;
  IndicatorSemantics semantics = IndicatorSemantics::containment;
};

/// A supply route with its derived cost and decayed value q * exp(-alpha c).
struct RouteValue {
  Route route;
  double cost = 0.0;
  double decayed_value = 0.0;
};

RouteValue route_value(const Graph& g, const Route& r, const CostDecayParams& params);

/// w(F) = sum over routes of q_r exp(-alpha c_r) [E_r matches F], where E_r
/// is the edge set induced by the route's nodes and c_r its total cost.
/// Throws ArgumentError for alpha <= 0 and DegenerateRouteError for a route
/// traversing no edge.
EdgeCharacteristic<double> supply_weight_fn(const Graph& g, std::span<const Route> routes,
                                            const CostDecayParams& params = {});

struct ContractRoute {
  std::vector<NodeId> nodes;
  Rational contracts;
};

using ContractRouteTable = std::vector<ContractRoute>;

/// w(F) = sum over contract routes of CV(S) [E_S matches F].
/// Contract counts must be non-negative integers.
EdgeCharacteristic<Rational> contract_weight_fn(const Graph& g, const ContractRouteTable& table,
                                                IndicatorSemantics semantics = IndicatorSemantics::containment);

/// w(F) = |F|^exponent, exponent >= 1.
EdgeCharacteristic<Rational> power_weight_fn(unsigned exponent);

template <class Scalar>
struct WeightedRoute {
  std::vector<NodeId> nodes;
  Scalar value;
};

namespace detail {

/// Mask of a route's nodes, checked to equal the endpoint union of the edges
/// it induces.
Coalition closed_form_route_mask(const Graph& g, std::span<const NodeId> nodes);

}  // namespace detail

/// Closed-form edge-based Shapley value of a containment route game:
/// each route's value is split equally over its nodes.
///
/// Under containment, w^N(S) = sum_r v_r [N_r within S] whenever N_r is the
/// endpoint union of the route's induced edges, i.e. a non-negative
/// combination of unanimity games. Throws ContractViolation when a route
/// node touches none of the route's induced edges.
template <class Scalar>
Allocation<Scalar> route_closed_form(const Graph& g, std::span<const WeightedRoute<Scalar>> routes) {
  Allocation<Scalar> result = Allocation<Scalar>::Zero(static_cast<Eigen::Index>(g.node_count()));
  for (const auto& route : routes) {
    const Coalition members = detail::closed_form_route_mask(g, route.nodes);
    const Scalar share = route.value / Scalar(static_cast<long long>(members.size()));
    members.for_each([&](std::size_t i) { result(static_cast<Eigen::Index>(i)) += share; });
  }
  return result;
}

/// Route values q_r exp(-alpha c_r) in closed-form input shape.
std::vector<WeightedRoute<double>> decayed_routes(const Graph& g, std::span<const Route> routes,
                                                  const CostDecayParams& params = {});
std::vector<WeightedRoute<Rational>> contract_routes(const ContractRouteTable& table);

}  // namespace edgeshap
