#include "catgen/cli_core.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "catgen/analytics.hpp"
#include "catgen/errors.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace catgen;
using namespace catgen::cli;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("catgen_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Parses "a,b,c\n..." into rows of cells.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.05) == "0.05");
  CHECK(format_number(0.123456789012345) == "0.123456789012");
  CHECK(format_number(4.441229068e-4) == "0.0004441229068");
}

TEST_CASE("scenario config parsing") {
  SUBCASE("defaults and overrides") {
    auto config = parse_scenario({{"alpha", "2.0"}, {"detector", "apd"}});
    CHECK(config.alpha == 2.0);
    CHECK(config.detector == "apd");
    CHECK(config.scheme == "three-tap");
    CHECK_FALSE(ScenarioConfig::is_set(config.r));
  }
  SUBCASE("unknown keys rejected") {
    CHECK_THROWS_AS(parse_scenario({{"alfa", "2.0"}}), DomainError);
  }
  SUBCASE("range checks") {
    CHECK_THROWS_AS(parse_scenario({{"r", "1.5"}}), DomainError);
    CHECK_THROWS_AS(parse_scenario({{"t2", "0"}}), DomainError);
    CHECK_THROWS_AS(parse_scenario({{"detector", "pmt"}}), DomainError);
    CHECK_THROWS_AS(parse_scenario({{"alpha", "abc"}}), DomainError);
  }
  SUBCASE("config file round trip") {
    const fs::path dir = fresh_dir("config");
    const fs::path path = dir / "scenario.cfg";
    std::ofstream(path) << "# demo scenario\n"
                        << "alpha = 1.5\n"
                        << "scheme = single-tap\n"
                        << "r = 0.4\n"
                        << "t1 = 0.99\n";
    auto config = parse_scenario(read_config_file(path.string()));
    CHECK(config.alpha == 1.5);
    CHECK(config.scheme == "single-tap");
    CHECK(config.r == 0.4);
    CHECK(config.t1 == 0.99);
  }
  SUBCASE("malformed lines rejected") {
    const fs::path dir = fresh_dir("badconfig");
    const fs::path path = dir / "bad.cfg";
    std::ofstream(path) << "alpha 1.5\n";
    CHECK_THROWS_AS(read_config_file(path.string()), DomainError);
  }
}

TEST_CASE("fig1 command") {
  const fs::path dir = fresh_dir("fig1");
  GridOptions grid{1.8, 2.0, 0.1};
  REQUIRE(cmd_fig1(grid, dir.string()) == kExitOk);

  auto fid = parse_csv(read_file(dir / "fig1_fidelity.csv"));
  REQUIRE(fid.size() == 4);  // header + 3 rows
  CHECK(fid[0] == std::vector<std::string>{"alpha", "F0", "F1", "F2", "F3",
                                           "F3_beta0"});
  // F1 at alpha = 1.9 sits on the 0.90 threshold.
  const double f1_19 = std::stod(fid[2][2]);
  CHECK(f1_19 > 0.895);
  CHECK(f1_19 < 0.905);
  // Dominance ordering within each row.
  for (size_t i = 1; i < fid.size(); ++i) {
    const double f0 = std::stod(fid[i][1]), f1v = std::stod(fid[i][2]);
    const double f2 = std::stod(fid[i][3]), f3v = std::stod(fid[i][4]);
    const double f3b0 = std::stod(fid[i][5]);
    CHECK(f3v >= f3b0 - 1e-9);
    CHECK(f3b0 >= f1v - 1e-9);
    CHECK(f2 >= f0 - 1e-9);
  }

  auto sq = parse_csv(read_file(dir / "fig1_squeezing.csv"));
  REQUIRE(sq.size() == 4);
  CHECK(sq[0] == std::vector<std::string>{"alpha", "r1", "r3", "r3_beta0"});
  CHECK(std::stod(sq[2][1]) ==
        doctest::Approx(analytics::r1_opt(1.9)).epsilon(1e-10));
}

TEST_CASE("fig2 command") {
  const fs::path dir = fresh_dir("fig2");
  REQUIRE(cmd_fig2({1.0}, dir.string()) == kExitOk);
  CHECK(fs::exists(dir / "fig2_vs_r_alpha1.csv"));
  CHECK(fs::exists(dir / "fig2_vs_beta_alpha1.csv"));

  auto markers = parse_csv(read_file(dir / "fig2_markers.csv"));
  REQUIRE(markers.size() == 3);  // header + r marker + beta marker
  CHECK(std::stod(markers[1][2]) ==
        doctest::Approx(analytics::r3_opt(1.0)).epsilon(1e-8));
  const double f_opt =
      analytics::f3(1.0, analytics::r3_opt(1.0), analytics::beta_opt_sq(1.0));
  CHECK(std::stod(markers[1][3]) == doctest::Approx(f_opt).epsilon(1e-8));

  // The beta sweep at alpha = 1 passes through the fidelity zero.
  auto beta_curve = parse_csv(read_file(dir / "fig2_vs_beta_alpha1.csv"));
  double min_f = 1.0;
  for (size_t i = 1; i < beta_curve.size(); ++i)
    min_f = std::min(min_f, std::stod(beta_curve[i][1]));
  CHECK(min_f < 1e-2);
}

TEST_CASE("fig4 command") {
  const fs::path dir_a = fresh_dir("fig4a");
  const fs::path dir_b = fresh_dir("fig4b");
  GridOptions grid{2.4, 2.5, 0.05};
  REQUIRE(cmd_fig4(grid, dir_a.string()) == kExitOk);
  REQUIRE(cmd_fig4(grid, dir_b.string()) == kExitOk);

  const std::string csv_a = read_file(dir_a / "fig4_probability.csv");
  SUBCASE("byte-identical across runs") {
    CHECK(csv_a == read_file(dir_b / "fig4_probability.csv"));
  }
  SUBCASE("probability near sqrt(6) is around 1.6e-2") {
    auto rows = parse_csv(csv_a);
    REQUIRE(rows.size() >= 3);
    const double p = std::stod(rows[2][1]);  // alpha = 2.45
    CHECK(p > 1.3e-2);
    CHECK(p < 1.9e-2);
  }
}

TEST_CASE("simulate command") {
  SUBCASE("single-tap small-R limit matches the closed form") {
    const fs::path dir = fresh_dir("sim1");
    ScenarioConfig config;
    config.scheme = "single-tap";
    config.alpha = std::sqrt(6.0);
    config.r = 0.781;
    config.t1 = 0.9999;
    config.out = (dir / "report.json").string();
    REQUIRE(cmd_simulate(config) == kExitOk);

    auto report = nlohmann::json::parse(read_file(config.out));
    CHECK(report["discrepancies"]["fidelity"].get<double>() < 1e-6);
    CHECK(report["discrepancies"]["probability_rel"].get<double>() < 1e-6);
    CHECK(report["per_stage_probabilities"].size() == 1);
  }
  SUBCASE("derived three-tap chain reproduces the headline numbers") {
    const fs::path dir = fresh_dir("sim3");
    ScenarioConfig config;
    config.out = (dir / "report.json").string();
    REQUIRE(cmd_simulate(config) == kExitOk);

    auto report = nlohmann::json::parse(read_file(config.out));
    CHECK(report["fidelity_vs_target_cat"].get<double>() ==
          doctest::Approx(0.9748502535).epsilon(1e-6));
    CHECK(report["probability"].get<double>() ==
          doctest::Approx(4.441229068e-4).epsilon(1e-6));
    CHECK(report["discrepancies"]["fidelity"].get<double>() < 1e-8);
    CHECK(report["discrepancies"]["probability_rel"].get<double>() < 1e-8);
    // Stable key order.
    const std::string text = read_file(config.out);
    CHECK(text.find("\"scheme\"") < text.find("\"alpha\""));
    CHECK(text.find("\"alpha\"") < text.find("\"probability\""));
  }
  SUBCASE("undersized cutoff exits with the precondition code") {
    const fs::path dir = fresh_dir("simcut");
    ScenarioConfig config;
    config.cutoff = 8;
    config.out = (dir / "report.json").string();
    CHECK(cmd_simulate(config) == kExitPrecondition);
  }
}

TEST_CASE("verify command") {
  SUBCASE("fresh state passes") {
    const fs::path dir = fresh_dir("verify");
    const std::string out = (dir / "verify.json").string();
    CHECK(cmd_verify(out) == kExitOk);
    auto report = nlohmann::json::parse(read_file(out));
    CHECK(report["all_pass"].get<bool>());
    bool found_lossy = false;
    for (const auto& check : report["checks"])
      if (check["name"] == "lossy_overlap_regression") found_lossy = true;
    CHECK(found_lossy);
  }
  SUBCASE("forced tiny cutoff reports truncation failures") {
    const fs::path dir = fresh_dir("verify12");
    const std::string out = (dir / "verify.json").string();
    CHECK(cmd_verify(out, 12) == kExitVerifyFailed);
    auto report = nlohmann::json::parse(read_file(out));
    CHECK_FALSE(report["all_pass"].get<bool>());
    bool saw_failure_detail = false;
    for (const auto& check : report["checks"])
      if (!check["pass"].get<bool>() &&
          !check["detail"].get<std::string>().empty())
        saw_failure_detail = true;
    CHECK(saw_failure_detail);
  }
}
