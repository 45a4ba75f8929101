#include "edgeshap/cli.hpp"

#include "edgeshap/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace edgeshap::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string input;
  std::string method = "edge_shapley";
  std::string format = "table";
  std::string output;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::size_t exact_limit = 24;
  bool timing = false;
};

Method require_method(const std::string& text) {
  if (const auto m = parse_method(text)) return *m;
  throw UsageError("unknown method '" + text +
                   "' (expected edge_shapley, edge_shapley_pruned, myerson, shapley, closed_form or sampled)");
}

Format require_format(const std::string& text) {
  if (const auto f = parse_format(text)) return *f;
  throw UsageError("unknown format '" + text + "' (expected json, csv or table)");
}

RunOptions run_options(const CommonOptions& o) {
  RunOptions r;
  r.samples = o.samples;
  r.seed = o.seed;
  r.timing = o.timing;
  r.engine.threads = o.threads;
  r.engine.exact_player_limit = o.exact_limit;
  return r;
}

void emit(const CommonOptions& o, const std::string& text, std::ostream& out) {
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw LookupError("cannot write '" + o.output + "'");
  file << text;
}

int compute_command(const CommonOptions& o, bool check_expected_flag, std::ostream& out) {
  const Scenario s = load_scenario_file(o.input);
  RunResult result = run_method(s, require_method(o.method), run_options(o));
  bool mismatch = false;
  if (check_expected_flag) {
    CheckResult c = result.exact ? check_expected(s, *result.exact) : check_expected(s, result.approx);
    mismatch = !c.passed && !c.informational;
    result.report.checks.push_back(std::move(c));
  }
  emit(o, render(result.report, require_format(o.format)), out);
  return mismatch ? kExitMismatch : kExitOk;
}

struct DeltaRow {
  NodeId node;
  std::optional<Rational> exact;
  double decimal = 0.0;
  bool removed = false;
};

std::vector<DeltaRow> deltas(const Scenario& base, const RunResult& before, const Scenario& modified,
                             const RunResult& after) {
  std::vector<DeltaRow> rows;
  const bool exact = before.exact && after.exact;
  for (std::size_t i = 0; i < base.graph.node_count(); ++i) {
    const NodeId& id = base.graph.node(i);
    const auto j = modified.graph.find_node(id);
    DeltaRow row{id, std::nullopt, 0.0, !j.has_value()};
    const auto bi = static_cast<Eigen::Index>(i);
    if (exact) {
      const Rational now = j ? Rational((*after.exact)(static_cast<Eigen::Index>(*j))) : Rational(0);
      row.exact = now - (*before.exact)(bi);
      row.decimal = row.exact->convert_to<double>();
    } else {
      const double now = j ? after.approx(static_cast<Eigen::Index>(*j)) : 0.0;
      row.decimal = now - before.approx(bi);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int whatif_command(const CommonOptions& o, const std::string& remove_node_label,
                   const std::vector<std::string>& remove_edge_labels, std::ostream& out) {
  const Method method = require_method(o.method);
  const Format format = require_format(o.format);
  const Scenario base = load_scenario_file(o.input);
  check_method_compatible(base, method);

  Scenario modified;
  std::string target;
  if (!remove_node_label.empty()) {
    modified = remove_node(base, NodeId{remove_node_label});
    target = "node " + remove_node_label;
  } else {
    modified = remove_edge(base, NodeId{remove_edge_labels.at(0)}, NodeId{remove_edge_labels.at(1)});
    target = "edge (" + remove_edge_labels[0] + "," + remove_edge_labels[1] + ")";
  }
  modified.name = base.name + " without " + target;

  const RunOptions options = run_options(o);
  const RunResult before = run_method(base, method, options);
  const RunResult after = run_method(modified, method, options);
  const std::vector<DeltaRow> rows = deltas(base, before, modified, after);

  std::optional<CheckResult> fairness;
  if (!remove_edge_labels.empty()) {
    const std::size_t a = base.graph.index_of(NodeId{remove_edge_labels[0]});
    const std::size_t b = base.graph.index_of(NodeId{remove_edge_labels[1]});
    CheckResult c{"fairness", true, method == Method::sampled, "", {}};
    if (rows[a].exact && rows[b].exact) {
      c.passed = *rows[a].exact == *rows[b].exact;
      c.witnesses = {remove_edge_labels[0] + ": " + to_string(*rows[a].exact),
                     remove_edge_labels[1] + ": " + to_string(*rows[b].exact)};
    } else {
      c.passed = ScalarTraits<double>::equal(rows[a].decimal, rows[b].decimal, 1e-9);
      c.witnesses = {remove_edge_labels[0] + ": " + format_shortest(rows[a].decimal),
                     remove_edge_labels[1] + ": " + format_shortest(rows[b].decimal)};
    }
    c.detail = c.passed ? "endpoint deltas equal" : "endpoint deltas differ";
    fairness = std::move(c);
  }

  std::ostringstream text;
  if (format == Format::json) {
    json doc = {{"scenario", base.name}, {"removed", target}, {"method", method_name(method)}};
    doc["baseline"] = report_json(before.report);
    doc["modified"] = report_json(after.report);
    json table = json::array();
    for (const DeltaRow& row : rows) {
      json entry = {{"node", row.node.label()}};
      if (row.exact) entry["exact"] = to_string(*row.exact);
      entry["decimal"] = row.decimal;
      entry["removed"] = row.removed;
      table.push_back(std::move(entry));
    }
    doc["deltas"] = std::move(table);
    if (fairness) {
      doc["fairness"] = {{"passed", fairness->passed},
                         {"informational", fairness->informational},
                         {"witnesses", fairness->witnesses}};
    }
    text << doc.dump(2) << '\n';
  } else if (format == Format::csv) {
    text << "node,delta\n";
    for (const DeltaRow& row : rows) {
      text << row.node.label() << ',' << (row.exact ? to_string(*row.exact) : format_shortest(row.decimal)) << '\n';
    }
  } else {
    text << "== baseline ==\n" << report_table(before.report) << "== without " << target << " ==\n"
         << report_table(after.report) << "== deltas (modified - baseline) ==\n"
         << std::setprecision(6);
    for (const DeltaRow& row : rows) {
      text << std::left << std::setw(8) << row.node.label() << std::setw(14) << row.decimal
           << (row.exact ? to_string(*row.exact) : "") << (row.removed ? "  (removed)" : "") << '\n';
    }
    if (fairness) {
      text << "fairness: " << (fairness->passed ? "pass" : "FAIL") << " (" << fairness->detail << ")\n";
      for (const auto& w : fairness->witnesses) text << "  " << w << '\n';
    }
  }
  emit(o, text.str(), out);
  return fairness && !fairness->passed && !fairness->informational ? kExitMismatch : kExitOk;
}

template <class Scalar>
std::pair<std::vector<CheckResult>, json> axiom_suite(const EdgeGame<Scalar>& game, const RunOptions& options) {
  const Graph& g = game.graph();
  const Allocation<Scalar> allocation = edge_shapley(game, options.engine);
  AxiomCheckOptions<Scalar> axiom_options;
  for (const NodeId& id : g.nodes()) axiom_options.labels.push_back(id.label());
  axiom_options.engine = options.engine;
  constexpr Axiom kAxioms[] = {Axiom::efficiency, Axiom::symmetry, Axiom::null_player};
  CheckReport report = axiom_check(lift(game), allocation, kAxioms, axiom_options);

  CheckResult fair{"fairness", true, false, "", {}};
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto d = fairness_delta(game, e, options.engine);
    const bool ok = ScalarTraits<Scalar>::equal(d.from_delta, d.to_delta, 1e-9);
    fair.passed = fair.passed && ok;
    fair.witnesses.push_back("(" + g.edge(e).from.label() + "," + g.edge(e).to.label() + "): " +
                             value_string(d.from_delta) + (ok ? " = " : " != ") + value_string(d.to_delta));
  }
  fair.detail = std::to_string(g.edge_count()) + " edge(s) checked";
  report.checks.push_back(std::move(fair));

  ComponentCheckOptions component_options;
  component_options.engine = options.engine;
  const auto components = component_efficiency_check(game, allocation, component_options);
  CheckResult comp{"component-efficiency", components.all_match(), true, "", {}};
  json comp_json = json::array();
  for (const auto& c : components.components) {
    std::string members;
    json labels = json::array();
    for (const NodeId& id : g.labels_of(c.members)) {
      members += (members.empty() ? "" : ",") + id.label();
      labels.push_back(id.label());
    }
    comp.witnesses.push_back("{" + members + "}: sum " + value_string(c.allocated) + (c.matches ? " = " : " vs ") +
                             "worth " + value_string(c.worth));
    comp_json.push_back({{"members", labels},
                         {"allocated", value_string(c.allocated)},
                         {"worth", value_string(c.worth)},
                         {"matches", c.matches}});
  }
  comp.detail = std::string(components.all_match() ? "every component matches" : "mismatch on some component") +
                "; additive on separated coalitions: " + (components.additive_when_separated ? "yes" : "no") +
                (components.exhaustive ? " (exhaustive)" : " (sampled)");
  report.checks.push_back(std::move(comp));

  json allocation_json = json::array();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    allocation_json.push_back({{"node", g.node(i).label()}, {"value", value_string(allocation(static_cast<Eigen::Index>(i)))}});
  }
  json extra = {{"allocation", allocation_json},
                {"components", comp_json},
                {"additive_when_separated", components.additive_when_separated},
                {"additive_on_disjoint", components.additive_on_disjoint}};
  return {std::move(report.checks), std::move(extra)};
}

int axioms_command(const CommonOptions& o, std::ostream& out) {
  const Format format = require_format(o.format);
  const Scenario s = load_scenario_file(o.input);
  const RunOptions options = run_options(o);
  auto [checks, extra] = std::visit([&](const auto& game) { return axiom_suite(game, options); }, build_edge_game(s));

  bool passed = true;
  for (const auto& c : checks) passed = passed && (c.passed || c.informational);

  std::ostringstream text;
  if (format == Format::json) {
    json doc = {{"scenario", s.name}, {"passed", passed}};
    doc.update(extra);
    json list = json::array();
    for (const auto& c : checks) {
      list.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"informational", c.informational},
                      {"detail", c.detail},
                      {"witnesses", c.witnesses}});
    }
    doc["checks"] = std::move(list);
    text << doc.dump(2) << '\n';
  } else {
    text << "scenario: " << s.name << '\n';
    for (const auto& c : checks) {
      text << c.name << ": " << (c.passed ? "pass" : (c.informational ? "note" : "FAIL")) << " (" << c.detail << ")\n";
      for (const auto& w : c.witnesses) text << "  " << w << '\n';
    }
    text << (passed ? "all applicable checks pass\n" : "some checks FAILED\n");
  }
  emit(o, text.str(), out);
  return passed ? kExitOk : kExitMismatch;
}

void add_common(CLI::App& cmd, CommonOptions& o, bool with_method) {
  cmd.add_option("--input", o.input, "Scenario JSON file")->required();
  if (with_method) {
    cmd.add_option("--method", o.method,
                   "edge_shapley | edge_shapley_pruned | myerson | shapley | closed_form | sampled");
    cmd.add_option("--samples", o.samples, "Permutations drawn by the sampled method");
    cmd.add_option("--seed", o.seed, "Seed for the sampled method");
  }
  cmd.add_option("--format", o.format, "json | csv | table");
  cmd.add_option("--output", o.output, "Write the report to this file instead of stdout");
  cmd.add_option("--threads", o.threads, "Worker threads (0 = all cores); output is identical for any value");
  cmd.add_option("--exact-limit", o.exact_limit, "Largest player count for exact enumeration");
  cmd.add_flag("--timing", o.timing, "Report elapsed_ms (makes output non-deterministic)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and sampled Shapley, Myerson and edge-based Shapley values for graph games", "edgeshap"};
  app.require_subcommand(1);

  CommonOptions compute_opts;
  bool check_expected_flag = false;
  auto* compute = app.add_subcommand("compute", "Compute an allocation for a scenario");
  add_common(*compute, compute_opts, true);
  compute->add_flag("--check-expected", check_expected_flag, "Exit 2 if the scenario's expected vector mismatches");

  CommonOptions whatif_opts;
  std::string remove_node_label;
  std::vector<std::string> remove_edge_labels;
  auto* whatif = app.add_subcommand("whatif", "Compare allocations before and after removing a node or edge");
  add_common(*whatif, whatif_opts, true);
  auto* node_opt = whatif->add_option("--remove-node", remove_node_label, "Node to remove");
  auto* edge_opt = whatif->add_option("--remove-edge", remove_edge_labels, "Edge endpoints to remove")->expected(2);
  node_opt->excludes(edge_opt);
  edge_opt->excludes(node_opt);

  CommonOptions axioms_opts;
  auto* axioms = app.add_subcommand("axioms", "Check efficiency, symmetry, null-player, fairness and component efficiency");
  add_common(*axioms, axioms_opts, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) return compute_command(compute_opts, check_expected_flag, out);
    if (whatif->parsed()) {
      if (remove_node_label.empty() && remove_edge_labels.empty()) {
        throw UsageError("whatif needs --remove-node U or --remove-edge A B");
      }
      return whatif_command(whatif_opts, remove_node_label, remove_edge_labels, out);
    }
    if (axioms->parsed()) return axioms_command(axioms_opts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "invalid scenario: " << e.what() << '\n';
    return kExitData;
  } catch (const LookupError& e) {
    err << "lookup error: " << e.what() << '\n';
    return kExitData;
  } catch (const DegenerateRouteError& e) {
    err << "invalid route: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace edgeshap::cli
