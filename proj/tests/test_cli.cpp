#include "edgeshap/cli.hpp"
#include "helpers.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace edgeshap {
namespace {

using nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "edgeshap");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string fixture_path(const std::string& name) { return (testing::fixture_dir() / (name + ".json")).string(); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("edgeshap-test-" + name);
  std::ofstream(path) << text;
  return path.string();
}

TEST(Cli, ComputeHGameJson) {
  const Outcome o = run_cli({"compute", "--input", fixture_path("counterexample-H"), "--format", "json"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_EQ(doc["method"], "edge_shapley");
  EXPECT_EQ(doc["domain"], "exact");
  EXPECT_EQ(doc["allocations"][0]["node"], "A");
  EXPECT_EQ(doc["allocations"][0]["exact"], "5/3");
  EXPECT_EQ(doc["allocations"][3]["exact"], "8/3");
  EXPECT_EQ(doc["total_exact"], "9");
  EXPECT_EQ(doc["total"], 9.0);
  EXPECT_EQ(doc["evaluations"], 32);
  EXPECT_TRUE(doc["elapsed_ms"].is_null());
}

TEST(Cli, JsonReportShapeForEveryMethod) {
  for (const char* method : {"edge_shapley", "edge_shapley_pruned", "myerson", "shapley", "sampled"}) {
    SCOPED_TRACE(method);
    const Outcome o = run_cli({"compute", "--input", fixture_path("counterexample-H"), "--method", method, "--samples",
                               "1000", "--format", "json"});
    ASSERT_EQ(o.code, cli::kExitOk) << o.err;
    const json doc = json::parse(o.out);
    EXPECT_EQ(doc["method"], method);
    EXPECT_TRUE(doc["scenario"].is_string());
    EXPECT_TRUE(doc["total"].is_number());
    EXPECT_TRUE(doc["checks"].is_array());
    EXPECT_TRUE(doc.contains("elapsed_ms"));
    ASSERT_EQ(doc["allocations"].size(), 5U);
    const bool exact = doc["domain"] == "exact";
    EXPECT_EQ(exact, std::string(method) != "sampled");
    for (const auto& entry : doc["allocations"]) {
      EXPECT_TRUE(entry["node"].is_string());
      EXPECT_TRUE(entry["decimal"].is_number_float());
      EXPECT_EQ(entry.contains("exact"), exact);
    }
  }
}

TEST(Cli, ComputeTableAndCheckExpected) {
  const Outcome o = run_cli({"compute", "--input", fixture_path("counterexample-H"), "--check-expected"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_NE(o.out.find("5/3"), std::string::npos);
  EXPECT_NE(o.out.find("check expected: pass"), std::string::npos);
}

TEST(Cli, CheckExpectedMismatchExitsTwo) {
  std::ifstream in(fixture_path("counterexample-H"));
  std::string text((std::istreambuf_iterator<char>(in)), {});
  text.replace(text.find("\"8/3\""), 5, "\"7/3\"");
  const Outcome o = run_cli({"compute", "--input", temp_file("mismatch.json", text), "--check-expected"});
  EXPECT_EQ(o.code, cli::kExitMismatch);
  EXPECT_NE(o.out.find("D: got 8/3, expected 7/3"), std::string::npos);
}

TEST(Cli, ClosedFormOnSupplyScenario) {
  const Outcome o = run_cli({"compute", "--input", fixture_path("chain-suppliers"), "--method", "closed_form",
                             "--format", "csv", "--check-expected"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_EQ(o.out.substr(0, 11), "node,value\n");
  EXPECT_NE(o.out.find("A,3.49259657947035"), std::string::npos) << o.out;
}

TEST(Cli, ClosedFormRejectedForPowerModel) {
  const Outcome o = run_cli({"compute", "--input", fixture_path("counterexample-H"), "--method", "closed_form"});
  EXPECT_EQ(o.code, cli::kExitUsage);
  EXPECT_NE(o.err.find("closed_form"), std::string::npos);
}

TEST(Cli, SampledSmartphoneNearClosedForm) {
  const Outcome sampled = run_cli({"compute", "--input", fixture_path("smartphone"), "--method", "sampled",
                                   "--samples", "200000", "--seed", "7", "--format", "json"});
  const Outcome closed =
      run_cli({"compute", "--input", fixture_path("smartphone"), "--method", "closed_form", "--format", "json"});
  ASSERT_EQ(sampled.code, cli::kExitOk) << sampled.err;
  ASSERT_EQ(closed.code, cli::kExitOk) << closed.err;
  const json a = json::parse(sampled.out), b = json::parse(closed.out);
  EXPECT_EQ(a["domain"], "approx");
  EXPECT_EQ(a["samples"], 200000);
  EXPECT_EQ(a["seed"], 7);
  for (std::size_t i = 0; i < b["allocations"].size(); ++i) {
    const double want = b["allocations"][i]["decimal"];
    const double got = a["allocations"][i]["decimal"];
    EXPECT_LE(std::abs(got - want), 0.02 * std::abs(want) + 1e-12) << b["allocations"][i]["node"];
  }
}

TEST(Cli, OutputIsIdenticalAcrossThreadCounts) {
  for (const char* method : {"edge_shapley", "edge_shapley_pruned", "sampled"}) {
    const std::vector<std::string> base{"compute", "--input", fixture_path("module-layers"), "--method", method,
                                        "--samples", "20000", "--format", "json"};
    auto one = base, four = base;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    EXPECT_EQ(run_cli(one).out, run_cli(four).out) << method;
  }
}

TEST(Cli, CsvMatchesJson) {
  const std::string input = fixture_path("module-layers");
  const Outcome csv = run_cli({"compute", "--input", input, "--format", "csv"});
  const json doc = json::parse(run_cli({"compute", "--input", input, "--format", "json"}).out);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "node,value");
  for (const auto& entry : doc["allocations"]) {
    ASSERT_TRUE(std::getline(lines, line));
    const auto comma = line.find(',');
    EXPECT_EQ(line.substr(0, comma), entry["node"]);
    EXPECT_EQ(std::stod(line.substr(comma + 1)), entry["decimal"].get<double>());
  }
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "edgeshap-test-out.csv";
  const Outcome o = run_cli({"compute", "--input", fixture_path("counterexample-H"), "--format", "csv", "--output",
                             path.string()});
  ASSERT_EQ(o.code, cli::kExitOk);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "node,value");
}

TEST(Cli, TimingFlagFillsElapsed) {
  const json doc = json::parse(
      run_cli({"compute", "--input", fixture_path("counterexample-H"), "--format", "json", "--timing"}).out);
  EXPECT_TRUE(doc["elapsed_ms"].is_number());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"compute"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"compute", "--input", fixture_path("counterexample-H"), "--method", "bogus"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"compute", "--input", fixture_path("counterexample-H"), "--format", "xml"}).code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"compute", "--input", fixture_path("counterexample-H"), "--method", "sampled", "--samples", "0"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"compute", "--input", fixture_path("smartphone"), "--method", "shapley", "--exact-limit", "10"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"compute", "--input", "/nonexistent/file.json"}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"compute", "--input", temp_file("broken.json", "{\"nodes\": [")}).code, cli::kExitData);
  EXPECT_EQ(run_cli({"whatif", "--input", fixture_path("counterexample-H")}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"whatif", "--input", fixture_path("counterexample-H"), "--remove-node", "Z"}).code,
            cli::kExitData);
  EXPECT_EQ(run_cli({"whatif", "--input", fixture_path("counterexample-H"), "--remove-node", "A", "--remove-edge",
                     "A", "D"})
                .code,
            cli::kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, cli::kExitOk);
}

TEST(Cli, WhatifRemoveEdgeHasEqualDeltas) {
  const Outcome o = run_cli({"whatif", "--input", fixture_path("counterexample-H"), "--remove-edge", "A", "D",
                             "--format", "json"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_EQ(doc["deltas"][0]["exact"], "-5/3");
  EXPECT_EQ(doc["deltas"][3]["exact"], "-5/3");
  EXPECT_TRUE(doc["fairness"]["passed"].get<bool>());
  EXPECT_EQ(doc["modified"]["total_exact"], "4");
}

TEST(Cli, WhatifRemoveNode) {
  const Outcome o = run_cli({"whatif", "--input", fixture_path("chain-suppliers"), "--remove-node", "A", "--format",
                             "json"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_NEAR(doc["modified"]["total"].get<double>(), 5.926545765453743, 1e-12);
  EXPECT_TRUE(doc["deltas"][0]["removed"].get<bool>());
  EXPECT_NEAR(doc["deltas"][0]["decimal"].get<double>(), -3.492596579470354, 1e-12);
  EXPECT_NEAR(doc["deltas"][1]["decimal"].get<double>(), -2.0109601381069178, 1e-12);
  for (int i = 2; i < 5; ++i) EXPECT_NEAR(doc["deltas"][i]["decimal"].get<double>(), -3.4925965794703533, 1e-12);
  EXPECT_EQ(doc.count("fairness"), 0U);
}

TEST(Cli, WhatifTableFormat) {
  const Outcome o = run_cli({"whatif", "--input", fixture_path("counterexample-H"), "--remove-edge", "C", "E"});
  ASSERT_EQ(o.code, cli::kExitOk);
  EXPECT_NE(o.out.find("fairness: pass"), std::string::npos);
  EXPECT_NE(o.out.find("== deltas (modified - baseline) =="), std::string::npos);
}

TEST(Cli, AxiomsReportComponentMismatch) {
  const Outcome o = run_cli({"axioms", "--input", fixture_path("counterexample-H"), "--format", "json"});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_TRUE(doc["passed"].get<bool>());
  const json& comps = doc["components"];
  ASSERT_EQ(comps.size(), 2U);
  EXPECT_EQ(comps[1]["members"], json::array({"C", "E"}));
  EXPECT_EQ(comps[1]["allocated"], "3");
  EXPECT_EQ(comps[1]["worth"], "1");
  EXPECT_FALSE(comps[1]["matches"].get<bool>());
  EXPECT_FALSE(doc["additive_when_separated"].get<bool>());
}

TEST(Cli, AxiomsOnAdditiveGame) {
  std::ifstream in(fixture_path("counterexample-H"));
  std::string text((std::istreambuf_iterator<char>(in)), {});
  text.replace(text.find("\"exponent\": 2"), 13, "\"exponent\": 1");
  text.erase(text.find(",\n  \"expected\""), text.find(",\n  \"metadata\"") - text.find(",\n  \"expected\""));
  const Outcome o = run_cli({"axioms", "--input", temp_file("additive.json", text)});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err << o.out;
  EXPECT_NE(o.out.find("component-efficiency: pass"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("additive on separated coalitions: yes"), std::string::npos);
}

}  // namespace
}  // namespace edgeshap
