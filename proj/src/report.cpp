#include "edgeshap/report.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

namespace edgeshap {

using nlohmann::json;

namespace {

constexpr std::pair<std::string_view, Method> kMethods[] = {
    {"edge_shapley", Method::edge_shapley}, {"edge_shapley_pruned", Method::edge_shapley_pruned},
    {"myerson", Method::myerson},           {"shapley", Method::shapley},
    {"closed_form", Method::closed_form},   {"sampled", Method::sampled},
};

template <class Scalar>
Allocation<Scalar> compute(const EdgeGame<Scalar>& game, Method method, const RunOptions& options,
                           EngineStats& stats) {
  switch (method) {
    case Method::edge_shapley:
      return edge_shapley(game, options.engine, &stats);
    case Method::edge_shapley_pruned:
      return edge_shapley_pruned(game, options.engine, &stats);
    case Method::shapley:
      return shapley_exact(lift(game), options.engine, &stats);
    case Method::myerson:
      return myerson(GraphGame<Scalar>{game.graph(), lift(game)}, options.engine, &stats);
    default:
      throw UsageError("method " + std::string(method_name(method)) + " is not an exact engine");
  }
}

void fill_values(RunResult& result, const Scenario& s) {
  const auto n = s.graph.node_count();
  result.report.nodes = s.graph.nodes();
  result.report.decimal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (result.exact) {
      result.report.exact.push_back(to_string((*result.exact)(idx)));
      result.report.decimal[i] = (*result.exact)(idx).convert_to<double>();
    } else {
      result.report.decimal[i] = result.approx(idx);
    }
  }
}

}  // namespace

std::optional<Method> parse_method(std::string_view text) {
  for (const auto& [name, m] : kMethods) {
    if (name == text) return m;
  }
  return std::nullopt;
}

std::string_view method_name(Method m) {
  for (const auto& [name, candidate] : kMethods) {
    if (candidate == m) return name;
  }
  return "unknown";
}

std::optional<Format> parse_format(std::string_view text) {
  if (text == "json") return Format::json;
  if (text == "csv") return Format::csv;
  if (text == "table") return Format::table;
  return std::nullopt;
}

void check_method_compatible(const Scenario& s, Method method) {
  if (method != Method::closed_form) return;
  const bool containment = std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SupplyModel>) return m.params.semantics == IndicatorSemantics::containment;
        if constexpr (std::is_same_v<T, ContractModel>) return m.semantics == IndicatorSemantics::containment;
        return false;
      },
      s.model);
  if (!containment) {
    throw UsageError("closed_form requires a containment-semantics route model, scenario '" + s.name + "' uses " +
                     std::string(model_type_name(s.model)));
  }
}

RunResult run_method(const Scenario& s, Method method, const RunOptions& options) {
  check_method_compatible(s, method);
  RunResult result;
  RunReport& r = result.report;
  r.scenario = s.name;
  r.method = method;
  r.domain = method == Method::sampled ? Domain::approx : s.domain;

  const auto start = std::chrono::steady_clock::now();
  std::visit(
      [&](const auto& game) {
        using Scalar = std::decay_t<decltype(game.characteristic()(EdgeSet{}))>;
        const Scalar worth = game.characteristic()(EdgeSet(game.graph().edge_count(), 0).set());
        if (method == Method::sampled) {
          r.samples = options.samples;
          r.seed = options.seed;
          result.approx = shapley_sampled(lift(game), options.samples, options.seed, options.engine, &r.stats);
          r.total = ScalarTraits<Scalar>::to_double(worth);
          return;
        }
        Allocation<Scalar> allocation;
        if (method == Method::closed_form) {
          if constexpr (std::is_same_v<Scalar, Rational>) {
            const auto routes = closed_form_routes_exact(s);
            allocation = route_closed_form<Rational>(s.graph, routes);
          } else {
            const auto routes = closed_form_routes_approx(s);
            allocation = route_closed_form<double>(s.graph, routes);
          }
        } else {
          allocation = compute(game, method, options, r.stats);
        }
        if constexpr (std::is_same_v<Scalar, Rational>) {
          r.total_exact = to_string(worth);
          r.total = worth.template convert_to<double>();
          result.exact = allocation;
          result.approx = allocation.unaryExpr([](const Rational& x) { return x.convert_to<double>(); });
        } else {
          r.total = worth;
          result.approx = allocation;
        }
      },
      build_edge_game(s));
  const auto stop = std::chrono::steady_clock::now();
  if (options.timing) r.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  fill_values(result, s);
  return result;
}

json report_json(const RunReport& r) {
  json out = json::object();
  out["scenario"] = r.scenario;
  out["method"] = method_name(r.method);
  out["domain"] = domain_name(r.domain);
  json allocations = json::array();
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    json entry = {{"node", r.nodes[i].label()}};
    if (!r.exact.empty()) entry["exact"] = r.exact[i];
    entry["decimal"] = r.decimal[i];
    allocations.push_back(std::move(entry));
  }
  out["allocations"] = std::move(allocations);
  out["total"] = r.total;
  if (r.total_exact) out["total_exact"] = *r.total_exact;
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"informational", c.informational},
                      {"detail", c.detail},
                      {"witnesses", c.witnesses}});
  }
  out["checks"] = std::move(checks);
  out["evaluations"] = r.stats.evaluations;
  out["marginals"] = r.stats.marginals;
  if (r.samples) out["samples"] = *r.samples;
  if (r.seed) out["seed"] = *r.seed;
  out["elapsed_ms"] = r.elapsed_ms ? json(*r.elapsed_ms) : json(nullptr);
  return out;
}

std::string report_csv(const RunReport& r) {
  std::ostringstream out;
  out << "node,value\n";
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    out << r.nodes[i].label() << ',' << (r.exact.empty() ? format_shortest(r.decimal[i]) : r.exact[i]) << '\n';
  }
  return out.str();
}

std::string report_table(const RunReport& r) {
  std::size_t width = 7;
  for (const NodeId& id : r.nodes) width = std::max(width, id.label().size() + 2);
  std::ostringstream out;
  out << "scenario: " << r.scenario << "\nmethod:   " << method_name(r.method) << " (" << domain_name(r.domain)
      << ")\n";
  if (r.samples) out << "samples:  " << *r.samples << " (seed " << *r.seed << ")\n";
  out << std::left << std::setw(static_cast<int>(width)) << "node" << std::setw(14) << "value"
      << (r.exact.empty() ? "" : "exact") << '\n';
  out << std::setprecision(6);
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    out << std::setw(static_cast<int>(width)) << r.nodes[i].label() << std::setw(14) << r.decimal[i]
        << (r.exact.empty() ? "" : r.exact[i]) << '\n';
  }
  out << std::setw(static_cast<int>(width)) << "total" << std::setw(14) << r.total << r.total_exact.value_or("")
      << '\n';
  for (const CheckResult& c : r.checks) {
    out << "check " << c.name << ": " << (c.informational ? "note" : (c.passed ? "pass" : "FAIL")) << " (" << c.detail
        << ")\n";
    for (const auto& w : c.witnesses) out << "  " << w << '\n';
  }
  if (r.elapsed_ms) out << "elapsed:  " << *r.elapsed_ms << " ms\n";
  return out.str();
}

std::string render(const RunReport& r, Format format) {
  switch (format) {
    case Format::json:
      return report_json(r).dump(2) + "\n";
    case Format::csv:
      return report_csv(r);
    case Format::table:
      return report_table(r);
  }
  return {};
}

}  // namespace edgeshap
