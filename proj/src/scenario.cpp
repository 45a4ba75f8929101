#include "edgeshap/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace edgeshap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& message) {
  throw ValidationError(pointer + ": " + message);
}

const json& require(const json& object, const std::string& key, const std::string& pointer) {
  const auto it = object.find(key);
  if (it == object.end()) fail(pointer, "missing required field \"" + key + "\"");
  return *it;
}

std::string require_string(const json& value, const std::string& pointer) {
  if (!value.is_string()) fail(pointer, "expected a string");
  return value.get<std::string>();
}

double require_number(const json& value, const std::string& pointer) {
  if (!value.is_number()) fail(pointer, "expected a number");
  return value.get<double>();
}

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed,
                         const std::string& pointer) {
  for (const auto& [key, _] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(pointer, "unknown field \"" + key + "\"");
    }
  }
}

Rational rational_field(const json& value, const std::string& pointer) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
  } catch (const ArgumentError& e) {
    fail(pointer, e.what());
  }
  fail(pointer, "expected an integer or \"p/q\" string");
}

NodeId node_field(const Graph& g, const json& value, const std::string& pointer) {
  NodeId id{require_string(value, pointer)};
  if (!g.find_node(id)) fail(pointer, "unknown node '" + id.label() + "'");
  return id;
}

IndicatorSemantics parse_semantics(const json& model, const std::string& pointer) {
  const auto it = model.find("semantics");
  if (it == model.end()) return IndicatorSemantics::containment;
  const std::string text = require_string(*it, pointer + "/semantics");
  if (text == "containment") return IndicatorSemantics::containment;
  if (text == "strict-equality" || text == "strict_equality") return IndicatorSemantics::strict_equality;
  fail(pointer + "/semantics", "expected \"containment\" or \"strict-equality\"");
}

std::string_view semantics_name(IndicatorSemantics s) {
  return s == IndicatorSemantics::containment ? "containment" : "strict-equality";
}

Model parse_model(const json& doc, const Graph& g) {
  const json& model = require(doc, "model", "");
  if (!model.is_object()) fail("/model", "expected an object");
  const std::string type = require_string(require(model, "type", "/model"), "/model/type");
  if (type == "supply_cost_decay") {
    reject_unknown_keys(model, {"type", "alpha", "semantics"}, "/model");
    SupplyModel m;
    if (model.contains("alpha")) m.params.alpha = require_number(model["alpha"], "/model/alpha");
    if (!(m.params.alpha > 0.0) || !std::isfinite(m.params.alpha)) fail("/model/alpha", "alpha must be positive");
    m.params.semantics = parse_semantics(model, "/model");
    return m;
  }
  if (type == "contract") {
    reject_unknown_keys(model, {"type", "semantics"}, "/model");
    return ContractModel{parse_semantics(model, "/model")};
  }
  if (type == "edge_count_power") {
    reject_unknown_keys(model, {"type", "exponent"}, "/model");
    const json& e = require(model, "exponent", "/model");
    if (!e.is_number_integer() || e.get<long long>() < 1) fail("/model/exponent", "expected an integer >= 1");
    return PowerModel{static_cast<unsigned>(e.get<long long>())};
  }
  if (type == "explicit_table") {
    reject_unknown_keys(model, {"type", "table"}, "/model");
    const json& table = require(model, "table", "/model");
    if (!table.is_array()) fail("/model/table", "expected an array");
    ExplicitTableModel m;
    std::set<EdgeSet> seen;
    for (std::size_t k = 0; k < table.size(); ++k) {
      const std::string ptr = "/model/table/" + std::to_string(k);
      const json& entry = table[k];
      if (!entry.is_object()) fail(ptr, "expected an object");
      reject_unknown_keys(entry, {"edges", "value"}, ptr);
      const json& edges = require(entry, "edges", ptr);
      if (!edges.is_array()) fail(ptr + "/edges", "expected an array of [from, to] pairs");
      TableEntry out;
      EdgeSet mask(g.edge_count());
      for (std::size_t j = 0; j < edges.size(); ++j) {
        const std::string eptr = ptr + "/edges/" + std::to_string(j);
        if (!edges[j].is_array() || edges[j].size() != 2) fail(eptr, "expected a [from, to] pair");
        NodeId a = node_field(g, edges[j][0], eptr + "/0");
        NodeId b = node_field(g, edges[j][1], eptr + "/1");
        const auto e = g.find_edge(a, b);
        if (!e) fail(eptr, "no edge between '" + a.label() + "' and '" + b.label() + "'");
        if (mask.test(*e)) fail(eptr, "edge listed twice");
        mask.set(*e);
        out.edges.emplace_back(std::move(a), std::move(b));
      }
      if (!seen.insert(mask).second) fail(ptr, "duplicate edge subset");
      out.value = rational_field(require(entry, "value", ptr), ptr + "/value");
      if (mask.none() && out.value != 0) fail(ptr + "/value", "the empty edge set must be worth 0");
      m.table.push_back(std::move(out));
    }
    return m;
  }
  fail("/model/type", "unknown model type '" + type + "'");
}

Domain parse_domain(const json& doc) {
  const std::string d = require_string(require(doc, "domain", ""), "/domain");
  if (d == "exact") return Domain::exact;
  if (d == "approx") return Domain::approx;
  fail("/domain", "expected \"exact\" or \"approx\"");
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

double parse_decimal(const std::string& text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    if (text.find('/') != std::string::npos) return parse_rational(text).convert_to<double>();
    throw ArgumentError("not a decimal literal: '" + text + "'");
  }
  return value;
}

void validate_routes(const Scenario& s) {
  for (std::size_t k = 0; k < s.routes.size(); ++k) {
    const std::string ptr = "/routes/" + std::to_string(k);
    try {
      route_cost(s.graph, s.routes[k]);
    } catch (const Error& e) {
      fail(ptr, e.what());
    }
    if (std::holds_alternative<ContractModel>(s.model)) {
      const double q = s.routes[k].quantity;
      if (q != std::floor(q)) fail(ptr + "/quantity", "contract counts must be integers");
    }
  }
}

}  // namespace

bool Scenario::regression_enabled() const {
  const auto it = metadata.find("regression");
  return it == metadata.end() || !it->is_string() || it->get<std::string>() != "skip";
}

std::string_view domain_name(Domain d) { return d == Domain::exact ? "exact" : "approx"; }

std::string_view model_type_name(const Model& m) {
  return std::visit(
      [](const auto& model) -> std::string_view {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, SupplyModel>) return "supply_cost_decay";
        if constexpr (std::is_same_v<T, ContractModel>) return "contract";
        if constexpr (std::is_same_v<T, PowerModel>) return "edge_count_power";
        return "explicit_table";
      },
      m);
}

Scenario load_scenario(std::string_view text, std::string name) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what(), line,
                     column);
  }
  if (!doc.is_object()) fail("", "scenario document must be a JSON object");
  reject_unknown_keys(doc, {"name", "nodes", "edges", "model", "routes", "domain", "expected", "metadata"}, "");

  Scenario s;
  s.name = doc.contains("name") ? require_string(doc["name"], "/name") : std::move(name);

  const json& nodes = require(doc, "nodes", "");
  if (!nodes.is_array()) fail("/nodes", "expected an array of labels");
  if (nodes.size() > kMaxPlayers) {
    fail("/nodes", std::to_string(nodes.size()) + " nodes exceed the limit of " + std::to_string(kMaxPlayers));
  }
  std::vector<NodeId> ids;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string label = require_string(nodes[i], "/nodes/" + std::to_string(i));
    if (label.empty()) fail("/nodes/" + std::to_string(i), "empty node label");
    if (!seen.insert(label).second) fail("/nodes/" + std::to_string(i), "duplicate node '" + label + "'");
    ids.emplace_back(label);
  }

  const json& edges = require(doc, "edges", "");
  if (!edges.is_array()) fail("/edges", "expected an array");
  std::vector<Edge> edge_list;
  std::set<std::pair<std::string, std::string>> pairs;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string ptr = "/edges/" + std::to_string(k);
    const json& e = edges[k];
    if (!e.is_object()) fail(ptr, "expected an object");
    reject_unknown_keys(e, {"from", "to", "cost"}, ptr);
    Edge edge{NodeId{require_string(require(e, "from", ptr), ptr + "/from")},
              NodeId{require_string(require(e, "to", ptr), ptr + "/to")},
              e.contains("cost") ? require_number(e["cost"], ptr + "/cost") : 0.0};
    if (!seen.count(edge.from.label())) fail(ptr + "/from", "unknown node '" + edge.from.label() + "'");
    if (!seen.count(edge.to.label())) fail(ptr + "/to", "unknown node '" + edge.to.label() + "'");
    if (edge.from == edge.to) fail(ptr, "self-loop on '" + edge.from.label() + "'");
    if (!(edge.cost >= 0.0) || !std::isfinite(edge.cost)) fail(ptr + "/cost", "cost must be a finite number >= 0");
    auto key = std::minmax(edge.from.label(), edge.to.label());
    if (!pairs.insert(key).second) {
      fail(ptr, "duplicate edge between '" + edge.from.label() + "' and '" + edge.to.label() + "'");
    }
    edge_list.push_back(std::move(edge));
  }
  s.graph = Graph(std::move(ids), std::move(edge_list));
  s.model = parse_model(doc, s.graph);
  s.domain = parse_domain(doc);

  const bool supply = std::holds_alternative<SupplyModel>(s.model);
  if (supply && s.domain != Domain::approx) fail("/domain", "supply_cost_decay requires the approx domain");
  if (!supply && s.domain != Domain::exact) fail("/domain", std::string(model_type_name(s.model)) + " requires the exact domain");

  if (doc.contains("routes")) {
    const json& routes = doc["routes"];
    if (!routes.is_array()) fail("/routes", "expected an array");
    if (!s.is_route_model() && !routes.empty()) {
      fail("/routes", "routes are only used by supply_cost_decay and contract models");
    }
    for (std::size_t k = 0; k < routes.size(); ++k) {
      const std::string ptr = "/routes/" + std::to_string(k);
      const json& r = routes[k];
      if (!r.is_object()) fail(ptr, "expected an object");
      reject_unknown_keys(r, {"nodes", "quantity"}, ptr);
      const json& members = require(r, "nodes", ptr);
      if (!members.is_array()) fail(ptr + "/nodes", "expected an array of labels");
      Route route;
      for (std::size_t j = 0; j < members.size(); ++j) {
        route.nodes.push_back(node_field(s.graph, members[j], ptr + "/nodes/" + std::to_string(j)));
      }
      route.quantity = require_number(require(r, "quantity", ptr), ptr + "/quantity");
      if (!(route.quantity >= 0.0) || !std::isfinite(route.quantity)) fail(ptr + "/quantity", "quantity must be >= 0");
      s.routes.push_back(std::move(route));
    }
  }
  validate_routes(s);

  if (doc.contains("expected")) {
    const json& expected = doc["expected"];
    if (!expected.is_object()) fail("/expected", "expected an object mapping node to value");
    for (const auto& [key, _] : expected.items()) {
      if (!s.graph.find_node(NodeId{key})) fail("/expected/" + key, "unknown node '" + key + "'");
    }
    for (const NodeId& id : s.graph.nodes()) {
      const std::string ptr = "/expected/" + id.label();
      const auto it = expected.find(id.label());
      if (it == expected.end()) fail("/expected", "missing value for node '" + id.label() + "'");
      std::string text = it->is_string() ? it->get<std::string>() : it->dump();
      try {
        if (s.domain == Domain::exact) {
          parse_rational(text);
        } else {
          parse_decimal(text);
        }
      } catch (const ArgumentError& e) {
        fail(ptr, e.what());
      }
      s.expected.emplace_back(id, std::move(text));
    }
  }

  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) fail("/metadata", "expected an object");
    s.metadata = doc["metadata"];
  }
  return s;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open scenario file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_scenario(buffer.str(), path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line(), e.column());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

json to_json(const Scenario& s) {
  json doc = json::object();
  doc["name"] = s.name;
  json nodes = json::array();
  for (const NodeId& id : s.graph.nodes()) nodes.push_back(id.label());
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (const Edge& e : s.graph.edges()) edges.push_back({{"from", e.from.label()}, {"to", e.to.label()}, {"cost", e.cost}});
  doc["edges"] = std::move(edges);

  doc["model"] = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SupplyModel>) {
          return {{"type", "supply_cost_decay"},
                  {"alpha", m.params.alpha},
                  {"semantics", semantics_name(m.params.semantics)}};
        } else if constexpr (std::is_same_v<T, ContractModel>) {
          return {{"type", "contract"}, {"semantics", semantics_name(m.semantics)}};
        } else if constexpr (std::is_same_v<T, PowerModel>) {
          return {{"type", "edge_count_power"}, {"exponent", m.exponent}};
        } else {
          json table = json::array();
          for (const TableEntry& entry : m.table) {
            json pairs = json::array();
            for (const auto& [a, b] : entry.edges) pairs.push_back({a.label(), b.label()});
            table.push_back({{"edges", std::move(pairs)}, {"value", to_string(entry.value)}});
          }
          return {{"type", "explicit_table"}, {"table", std::move(table)}};
        }
      },
      s.model);

  if (s.is_route_model()) {
    json routes = json::array();
    for (const Route& r : s.routes) {
      json members = json::array();
      for (const NodeId& id : r.nodes) members.push_back(id.label());
      routes.push_back({{"nodes", std::move(members)}, {"quantity", r.quantity}});
    }
    doc["routes"] = std::move(routes);
  }
  doc["domain"] = domain_name(s.domain);
  if (s.has_expected()) {
    json expected = json::object();
    for (const auto& [id, value] : s.expected) expected[id.label()] = value;
    doc["expected"] = std::move(expected);
  }
  if (!s.metadata.empty()) doc["metadata"] = s.metadata;
  return doc;
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

namespace {

bool entry_survives(const TableEntry& entry, const Graph& reduced) {
  return std::all_of(entry.edges.begin(), entry.edges.end(),
                     [&](const auto& pair) { return reduced.find_edge(pair.first, pair.second).has_value(); });
}

void prune_table(Scenario& s) {
  if (auto* table = std::get_if<ExplicitTableModel>(&s.model)) {
    std::erase_if(table->table, [&](const TableEntry& entry) { return !entry_survives(entry, s.graph); });
  }
}

}  // namespace

Scenario remove_node(const Scenario& s, const NodeId& u) {
  const std::size_t index = s.graph.index_of(u);
  Scenario out = s;
  out.graph = s.graph.without_node(index);
  std::erase_if(out.routes, [&](const Route& r) { return std::find(r.nodes.begin(), r.nodes.end(), u) != r.nodes.end(); });
  prune_table(out);
  out.expected.clear();
  return out;
}

Scenario remove_edge(const Scenario& s, const NodeId& a, const NodeId& b) {
  const std::size_t e = s.graph.edge_index(a, b);
  Scenario out = s;
  out.graph = s.graph.without_edge(e);
  std::erase_if(out.routes, [&](const Route& r) {
    const bool has_a = std::find(r.nodes.begin(), r.nodes.end(), a) != r.nodes.end();
    const bool has_b = std::find(r.nodes.begin(), r.nodes.end(), b) != r.nodes.end();
    return has_a && has_b;
  });
  prune_table(out);
  out.expected.clear();
  return out;
}

ContractRouteTable contract_table(const Scenario& s) {
  ContractRouteTable table;
  for (const Route& r : s.routes) table.push_back({r.nodes, Rational(static_cast<long long>(std::llround(r.quantity)))});
  return table;
}

EdgeGame<Rational> build_exact_game(const Scenario& s) {
  if (s.domain != Domain::exact) throw ArgumentError("scenario '" + s.name + "' is not in the exact domain");
  if (const auto* m = std::get_if<PowerModel>(&s.model)) return EdgeGame<Rational>(s.graph, power_weight_fn(m->exponent));
  if (const auto* m = std::get_if<ContractModel>(&s.model)) {
    return EdgeGame<Rational>(s.graph, contract_weight_fn(s.graph, contract_table(s), m->semantics));
  }
  if (const auto* m = std::get_if<ExplicitTableModel>(&s.model)) {
    auto values = std::make_shared<std::map<EdgeSet, Rational>>();
    for (const TableEntry& entry : m->table) {
      EdgeSet mask(s.graph.edge_count());
      for (const auto& [a, b] : entry.edges) mask.set(s.graph.edge_index(a, b));
      (*values)[mask] = entry.value;
    }
    return EdgeGame<Rational>(s.graph, EdgeCharacteristic<Rational>(
                                           [values](const EdgeSet& f) {
                                             const auto it = values->find(f);
                                             return it == values->end() ? Rational(0) : it->second;
                                           },
                                           s.graph.edge_count()));
  }
  throw ArgumentError("model " + std::string(model_type_name(s.model)) + " has no exact-domain game");
}

EdgeGame<double> build_approx_game(const Scenario& s) {
  if (const auto* m = std::get_if<SupplyModel>(&s.model)) {
    return EdgeGame<double>(s.graph, supply_weight_fn(s.graph, s.routes, m->params));
  }
  throw ArgumentError("model " + std::string(model_type_name(s.model)) + " has no approx-domain game");
}

AnyEdgeGame build_edge_game(const Scenario& s) {
  if (s.domain == Domain::exact) return build_exact_game(s);
  return build_approx_game(s);
}

std::vector<WeightedRoute<double>> closed_form_routes_approx(const Scenario& s) {
  const auto* m = std::get_if<SupplyModel>(&s.model);
  if (!m || m->params.semantics != IndicatorSemantics::containment) {
    throw ArgumentError("closed form needs a containment-semantics supply model");
  }
  return decayed_routes(s.graph, s.routes, m->params);
}

std::vector<WeightedRoute<Rational>> closed_form_routes_exact(const Scenario& s) {
  const auto* m = std::get_if<ContractModel>(&s.model);
  if (!m || m->semantics != IndicatorSemantics::containment) {
    throw ArgumentError("closed form needs a containment-semantics contract model");
  }
  return contract_routes(contract_table(s));
}

CheckResult check_expected(const Scenario& s, const Allocation<Rational>& allocation) {
  CheckResult r{"expected", true, false, "", {}};
  if (!s.has_expected()) {
    r.informational = true;
    r.detail = "no expected vector";
    return r;
  }
  for (std::size_t i = 0; i < s.expected.size(); ++i) {
    const Rational want = parse_rational(s.expected[i].second);
    const Rational& got = allocation(static_cast<Eigen::Index>(i));
    if (want != got) {
      r.passed = false;
      r.witnesses.push_back(s.expected[i].first.label() + ": got " + to_string(got) + ", expected " + to_string(want));
    }
  }
  r.detail = r.passed ? "exact match" : std::to_string(r.witnesses.size()) + " mismatch(es)";
  if (!s.regression_enabled()) {
    r.informational = true;
    r.detail += " (regression disabled for this scenario)";
  }
  return r;
}

CheckResult check_expected(const Scenario& s, const Allocation<double>& allocation) {
  CheckResult r{"expected", true, false, "", {}};
  if (!s.has_expected()) {
    r.informational = true;
    r.detail = "no expected vector";
    return r;
  }
  for (std::size_t i = 0; i < s.expected.size(); ++i) {
    const double want = parse_decimal(s.expected[i].second);
    const double got = allocation(static_cast<Eigen::Index>(i));
    if (!(std::abs(want - got) <= kApproxRegressionTolerance)) {
      r.passed = false;
      r.witnesses.push_back(s.expected[i].first.label() + ": got " + format_shortest(got) + ", expected " +
                            s.expected[i].second);
    }
  }
  r.detail = r.passed ? "within " + format_shortest(kApproxRegressionTolerance) : std::to_string(r.witnesses.size()) + " mismatch(es)";
  if (!s.regression_enabled()) {
    r.informational = true;
    r.detail += " (regression disabled for this scenario)";
  }
  return r;
}

std::vector<Scenario> load_fixture_set(const std::filesystem::path& directory) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Scenario> out;
  for (const auto& f : files) out.push_back(load_scenario_file(f));
  return out;
}

}  // namespace edgeshap
