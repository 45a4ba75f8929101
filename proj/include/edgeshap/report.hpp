#pragma once

#include "edgeshap/scenario.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edgeshap {

enum class Method { edge_shapley, edge_shapley_pruned, myerson, shapley, closed_form, sampled };
enum class Format { json, csv, table };

std::optional<Method> parse_method(std::string_view text);
std::string_view method_name(Method m);
std::optional<Format> parse_format(std::string_view text);

/// A method that cannot be applied to a scenario's model.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  bool timing = false;
  EngineOptions engine;
};

struct RunReport {
  std::string scenario;
  Method method = Method::edge_shapley;
  /// Domain of the reported values; sampled runs are always approx.
  Domain domain = Domain::exact;
  std::vector<NodeId> nodes;
  /// Present iff domain is exact.
  std::vector<std::string> exact;
  std::vector<double> decimal;
  /// Worth of the grand coalition.
  std::optional<std::string> total_exact;
  double total = 0.0;
  std::vector<CheckResult> checks;
  std::optional<double> elapsed_ms;
  EngineStats stats;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
};

/// A report plus the raw allocation it was built from.
struct RunResult {
  RunReport report;
  std::optional<Allocation<Rational>> exact;
  Allocation<double> approx;
};

/// Throws UsageError when `method` does not fit the scenario's model.
void check_method_compatible(const Scenario& s, Method method);

RunResult run_method(const Scenario& s, Method method, const RunOptions& options = {});

nlohmann::json report_json(const RunReport& r);
std::string report_csv(const RunReport& r);
std::string report_table(const RunReport& r);
std::string render(const RunReport& r, Format format);

}  // namespace edgeshap
