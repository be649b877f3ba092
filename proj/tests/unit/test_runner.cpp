#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "runner.hpp"

using namespace emi;
using namespace emi::tools;
namespace fs = std::filesystem;

TEST(Runner, RunCaseReportsFields) {
  CaseParams c;
  c.N = 8;
  c.tau = 0.1;
  c.precond = "ilu0";
  const auto r = run_case(c);
  ASSERT_FALSE(r.error.has_value());
  EXPECT_EQ(r.n, 97u);
  EXPECT_TRUE(r.report.converged);
  const auto j = to_json(r);
  for (const char* k : {"n", "N", "p", "tau", "precond", "rhs", "iterations", "rel_residual",
                        "seconds", "converged"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_EQ(j["precond"], "ilu0");
  EXPECT_FALSE(j.contains("error"));
}

TEST(Runner, ErrorsAreCaptured) {
  CaseParams c;
  c.N = 12;
  c.precond = "mg";
  const auto r = run_case(c);
  ASSERT_TRUE(r.error.has_value());
  EXPECT_TRUE(to_json(r).contains("error"));
}

TEST(Runner, MultigridCase) {
  CaseParams c;
  c.N = 32;
  c.tau = 1e-3;
  c.precond = "mg";
  const auto r = run_case(c);
  ASSERT_FALSE(r.error.has_value());
  EXPECT_LE(r.report.iterations, 15u);
}

TEST(Runner, GridIsDeterministicAcrossWorkers) {
  std::vector<CaseParams> cells;
  for (double tau : {1.0, 0.1, 0.01}) {
    CaseParams c;
    c.N = 16;
    c.tau = tau;
    c.rhs = RhsKind::kUnit;
    cells.push_back(c);
  }
  const auto one = run_grid(cells, 1);
  const auto three = run_grid(cells, 3);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].params.tau, cells[i].tau);
    EXPECT_EQ(one[i].report.iterations, three[i].report.iterations);
    EXPECT_EQ(one[i].report.relative_residual, three[i].report.relative_residual);
  }
}

TEST(Runner, ParallelForVisitsEachIndexOnce) {
  std::vector<std::atomic<int>> hits(50);
  parallel_for(50, 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Runner, CellNames) {
  CaseParams c;
  c.N = 32;
  c.tau = 0.01;
  c.precond = "ilu0";
  EXPECT_EQ(cell_name(c), "N32_tau0.01_ilu0_sine");
  EXPECT_EQ(parse_rhs("unit"), RhsKind::kUnit);
  EXPECT_THROW(parse_rhs("cosine"), std::invalid_argument);
}

TEST(Runner, ConfigFile) {
  const auto d = fs::temp_directory_path() / "emi_test_cfg";
  fs::create_directories(d);
  {
    std::ofstream out(d / "run.cfg");
    out << "# comment\nN = 64\ntau=0.01  # trailing\n\nprecond=ssor\n";
  }
  const auto m = read_config_file(d / "run.cfg");
  EXPECT_EQ(m.at("N"), "64");
  EXPECT_EQ(m.at("tau"), "0.01");
  EXPECT_EQ(m.at("precond"), "ssor");
  {
    std::ofstream out(d / "bad.cfg");
    out << "colour=blue\n";
  }
  EXPECT_THROW(read_config_file(d / "bad.cfg"), std::runtime_error);
}

TEST(Runner, ReportFollowsDocumentedSchema) {
  std::ifstream in(EMI_SCHEMA_PATH);
  ASSERT_TRUE(in.good());
  const auto schema = nlohmann::json::parse(in);
  CaseParams ok;
  ok.N = 8;
  CaseParams bad;
  bad.N = 12;
  bad.precond = "mg";
  for (const auto& c : {ok, bad}) {
    const auto j = to_json(run_case(c));
    for (const auto& key : schema["required"]) EXPECT_TRUE(j.contains(key.get<std::string>())) << key;
    for (const auto& [key, value] : j.items()) {
      ASSERT_TRUE(schema["properties"].contains(key)) << key;
      const std::string type = schema["properties"][key]["type"];
      const bool matches = (type == "integer" && value.is_number_integer()) ||
                           (type == "number" && value.is_number()) ||
                           (type == "string" && value.is_string()) ||
                           (type == "boolean" && value.is_boolean());
      EXPECT_TRUE(matches) << key;
    }
  }
}
