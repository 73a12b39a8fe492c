#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "fixtures.hpp"
#include "hhs/commands.hpp"

using namespace hhs;
using io::Json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

/// Runs the built binary through the shell, stderr discarded.
Outcome invoke(const std::string& args, const std::string& env = {}) {
  std::string command = env + " " + std::string(HHS_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buffer{};
  std::size_t n = 0;
  while ((n = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) result.out.append(buffer.data(), n);
  int status = ::pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string data(const std::string& name) { return fixtures::data_path(name); }

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "hhs_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

Outcome run_direct(cli::RunConfig cfg) {
  std::ostringstream out, err;
  int code = cli::run(cfg, out, err);
  return {code, out.str()};
}

}  // namespace

TEST(Check, BundledStructuresPass) {
  for (const char* name : {"toy1_small.json", "toy2.json"}) {
    auto r = invoke("check " + data(name));
    ASSERT_EQ(r.code, 0) << name;
    auto j = Json::parse(r.out);
    EXPECT_TRUE(j["relation_violations"].empty());
    EXPECT_EQ(j["transverse_consistency"]["constant"], Json(0)) << name;
    EXPECT_EQ(j["bounded_geodesic_image"]["constant"], Json(0)) << name;
    EXPECT_EQ(j["partial_realization"]["constant"], Json(0)) << name;
  }
}

TEST(Check, SelfOrthogonalDomainExitsOne) {
  auto j = io::structure_to_json(fixtures::bundled("toy1_small.json"));
  j["orthogonal"].push_back(Json::array({"F0_x", "F0_x"}));
  auto path = scratch("self_orthogonal.json");
  io::write_text_file(path, io::dump(j));
  auto r = invoke("check " + path.string());
  EXPECT_EQ(r.code, 1);
  auto report = Json::parse(r.out);
  ASSERT_EQ(report["relation_violations"].size(), 1u);
  EXPECT_EQ(report["relation_violations"][0]["axiom"], Json("RelationConflict"));
}

TEST(Check, AxiomFailureListsEveryViolation) {
  auto j = io::structure_to_json(fixtures::bundled("toy2.json"));
  auto& complements = j["complements"];
  for (std::size_t i = 0; i < complements.size(); ++i) {
    if (complements[i]["v"] == "O" && complements[i]["w"] == "B") {
      complements.erase(i);
      break;
    }
  }
  auto path = scratch("missing_complement.json");
  io::write_text_file(path, io::dump(j));
  auto r = invoke("check " + path.string() + " --out " + scratch("violations.json").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  auto report = io::read_json_file(scratch("violations.json"));
  ASSERT_FALSE(report["relation_violations"].empty());
  EXPECT_EQ(report["relation_violations"][0]["axiom"], Json("complement"));
  EXPECT_EQ(report["relation_violations"][0]["tuple"], Json::array({"O", "B"}));
  EXPECT_FALSE(report.contains("lipschitz"));
}

TEST(Distfit, TreeOfFlatsFitsExactly) {
  auto r = invoke("distfit " + data("toy1_small.json") + " --fit-out " + scratch("fit.json").string());
  ASSERT_EQ(r.code, 0);
  std::istringstream csv(r.out);
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "x,y,d_X,sum,thresholded_sum");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream cells_in(line);
    for (std::string cell; std::getline(cells_in, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 5u);
    EXPECT_EQ(cells[2], cells[3]) << line;
  }
  EXPECT_EQ(rows, 45u * 44 / 2);
  auto fit = io::read_json_file(scratch("fit.json"));
  EXPECT_EQ(fit["K"], Json(1));
  EXPECT_EQ(fit["C"], Json(0));
}

TEST(Distfit, HugeThresholdIsFlagged) {
  auto r = invoke("distfit " + data("toy1_small.json") + " --threshold 100");
  ASSERT_EQ(r.code, 0);
  auto fit = Json::parse(r.out.substr(r.out.find('{')));
  EXPECT_TRUE(fit["K"].is_null());
  EXPECT_TRUE(fit["C"].is_null());
  EXPECT_EQ(fit["flags"], Json::array({"DegeneratePairs"}));
}

TEST(Distfit, PairBudgetSamples) {
  auto r = invoke("distfit " + data("toy1_medium.json") + " --pair-budget 50 --seed 3 --threshold 1/2");
  ASSERT_EQ(r.code, 0);
  auto fit = Json::parse(r.out.substr(r.out.find('{')));
  EXPECT_EQ(fit["pairs"], Json(50));
  EXPECT_EQ(fit["threshold_s"], Json(0.5));
}

TEST(Classify, BundledIntervalComplexTable) {
  auto r = invoke("classify " + data("toy2.json"));
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  auto relation = [&](const std::string& a, const std::string& b) {
    for (const auto& row : j["pairs"]) {
      if ((row["u"] == a && row["v"] == b) || (row["u"] == b && row["v"] == a)) return row;
    }
    return Json();
  };
  EXPECT_EQ(relation("G", "B")["relation"], Json("Orthogonal"));
  EXPECT_EQ(relation("O", "P")["relation"], Json("Orthogonal"));
  EXPECT_EQ(relation("O", "B")["nested_in"], Json("B"));
  EXPECT_EQ(relation("Y", "N")["relation"], Json("Transverse"));
  EXPECT_FALSE(relation("Y", "N")["rho_u_in_v"].is_null());
  EXPECT_EQ(j["pairs"].size(), 7u * 6 / 2);
}

TEST(Classify, CsvAndSingleDomain) {
  auto r = invoke("classify --format csv " + data("toy1_small.json"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("u,v,relation,rho_u_in_v,rho_v_in_u,description\n", 0), 0u);
  EXPECT_NE(r.out.find("F0_x,F0_y,Orthogonal,-,-,F0_x orthogonal to F0_y"), std::string::npos);

  StructureData single;
  single.total_space = path_of_length(2);
  single.domains.push_back({"U", path_of_length(2), {0, 1, 2}});
  auto path = scratch("single.json");
  io::write_text_file(path, io::dump(io::structure_to_json(HHSStructure::create(single))));
  auto j = Json::parse(invoke("classify " + path.string()).out);
  EXPECT_EQ(j["domains"], Json::array({"U"}));
  EXPECT_TRUE(j["pairs"].empty());
}

TEST(Delta, GridAndCap) {
  auto grid = scratch("grid.json");
  ASSERT_EQ(invoke("build --example flat-grid --size 3 --out " + grid.string()).code, 0);
  auto r = invoke("delta " + grid.string());
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["four_point_delta"], Json(3));
  EXPECT_EQ(j["n"], Json(16));
  EXPECT_EQ(invoke("delta " + grid.string() + " --delta-cap 10").code, 2);
}

TEST(Hull, JsonAndDot) {
  auto dot = scratch("hull.dot");
  auto r = invoke("hull " + data("toy1_small.json") + " --x 0 --y 8 --dot " + dot.string());
  ASSERT_EQ(r.code, 0);
  auto j = Json::parse(r.out);
  EXPECT_EQ(j["size"], Json(9));
  std::ifstream in(dot);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(text.rfind("graph", 0), 0u);
  EXPECT_NE(text.find("fillcolor=orange"), std::string::npos);
  EXPECT_EQ(invoke("hull " + data("toy1_small.json") + " --x 0 --y 99").code, 2);
}

TEST(Export, Formats) {
  auto csv = invoke("export --format csv " + data("toy1_small.json"));
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("x,T,F0_x,F0_y,", 0), 0u);
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 46);
  auto svg = invoke("export --format svg-plot --u F1_x --v F2_x " + data("toy1_small.json"));
  ASSERT_EQ(svg.code, 0);
  EXPECT_EQ(svg.out.rfind("<svg", 0), 0u);
  EXPECT_EQ(invoke("export --format svg-plot --u nope " + data("toy1_small.json")).code, 2);
  EXPECT_EQ(invoke("export --format dot " + data("toy2.json")).out.rfind("graph \"toy2\"", 0), 0u);
}

TEST(RoundTrip, BuildExportIsByteExact) {
  for (const char* name : {"toy1_small.json", "toy1_medium.json", "toy2.json"}) {
    auto first = scratch(std::string("first_") + name);
    ASSERT_EQ(invoke("build --config " + data(name) + " --out " + first.string()).code, 0);
    auto again = invoke("export " + first.string());
    ASSERT_EQ(again.code, 0);
    std::ifstream in(first);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(again.out, text) << name;
  }
}

TEST(ExitCodes, ParseAndUsageErrors) {
  auto bad = scratch("bad.json");
  io::write_text_file(bad, "{ not json");
  EXPECT_EQ(invoke("check " + bad.string()).code, 2);
  EXPECT_EQ(invoke("check /nonexistent.json").code, 2);
  EXPECT_EQ(invoke("frobnicate").code, 2);
  EXPECT_EQ(invoke("check").code, 2);
  EXPECT_EQ(invoke("check " + data("toy2.json") + " --family-cap 0").code, 2);
  EXPECT_EQ(invoke("distfit " + data("toy2.json") + " --threshold x").code, 2);
  EXPECT_EQ(invoke("build --example tree-of-flats --N 0").code, 1);
}

TEST(ExitCodes, VertexCapOverride) {
  EXPECT_EQ(invoke("check " + data("toy1_small.json"), "HHS_MAX_VERTICES=20").code, 2);
  EXPECT_EQ(invoke("check " + data("toy1_small.json"), "HHS_MAX_VERTICES=45").code, 0);
}

TEST(Direct, RunMatchesBinary) {
  cli::RunConfig cfg;
  cfg.command = cli::Command::Check;
  cfg.input = data("toy2.json");
  auto direct = run_direct(cfg);
  EXPECT_EQ(direct.code, 0);
  EXPECT_EQ(direct.out, invoke("check " + data("toy2.json")).out);
  cfg.pair_budget = 0;
  EXPECT_EQ(run_direct(cfg).code, cli::kExitError);
  cfg = {};
  cfg.command = cli::Command::Build;
  cfg.radius = 1;
  cfg.depth = 1;
  EXPECT_EQ(run_direct(cfg).out, io::dump(io::structure_to_json(fixtures::bundled("toy1_small.json"))));
}

TEST(Direct, ExitCodeMapping) {
  EXPECT_EQ(cli::exit_code_for(ErrorCode::RelationConflict), 1);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::MissingRho), 1);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::ValidationFirst), 1);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::ParseError), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCode::SizeLimitExceeded), 2);
}
