#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "catgen/cli_core.hpp"
#include "catgen/errors.hpp"

namespace {

using catgen::cli::GridOptions;
using catgen::cli::ScenarioConfig;

void add_grid_options(CLI::App* cmd, GridOptions& grid) {
  cmd->add_option("--alpha-min", grid.alpha_min, "Smallest cat amplitude")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha-max", grid.alpha_max, "Largest cat amplitude")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--alpha-step", grid.alpha_step, "Grid step")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cat-state generation by multi-photon subtraction: figure data, "
      "circuit simulation, and self-verification"};
  app.require_subcommand(1);

  GridOptions fig1_grid;
  std::string fig1_out = ".";
  auto* fig1 = app.add_subcommand(
      "fig1", "Optimal fidelities and squeezing versus cat amplitude (CSV)");
  add_grid_options(fig1, fig1_grid);
  fig1->add_option("--out", fig1_out, "Output directory");

  std::vector<double> fig2_alphas{1.0, 2.0, 3.0, 4.0, 5.0};
  std::string fig2_out = ".";
  auto* fig2 = app.add_subcommand(
      "fig2", "Fidelity sensitivity curves around the optimum (CSV)");
  fig2->add_option("--alpha", fig2_alphas, "Cat amplitudes (repeatable)")
      ->check(CLI::PositiveNumber);
  fig2->add_option("--out", fig2_out, "Output directory");

  GridOptions fig4_grid;
  std::string fig4_out = ".";
  auto* fig4 = app.add_subcommand(
      "fig4", "Success probability of the optimized beta=0 scheme (CSV)");
  add_grid_options(fig4, fig4_grid);
  fig4->add_option("--out", fig4_out, "Output directory");

  std::string sim_config_path;
  ScenarioConfig scenario;
  auto* simulate = app.add_subcommand(
      "simulate", "Run the conditional circuit for one scenario (JSON)");
  simulate->add_option("--config", sim_config_path,
                       "Flat key=value scenario file");
  simulate->add_option("--scheme", scenario.scheme,
                       "three-tap or single-tap");
  simulate->add_option("--alpha", scenario.alpha, "Target cat amplitude")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--r", scenario.r, "Squeezing of the input state");
  simulate->add_option("--t1", scenario.t1, "First tap transmissivity");
  simulate->add_option("--t2", scenario.t2, "Second tap transmissivity");
  simulate->add_option("--t3", scenario.t3, "Third tap transmissivity");
  simulate->add_option("--beta", scenario.beta,
                       "Trigger displacement scale (real)");
  simulate->add_option("--cutoff", scenario.cutoff,
                       "Fock cutoff override (0 = automatic)");
  simulate->add_option("--detector", scenario.detector, "nr1 or apd")
      ->check(CLI::IsMember({"nr1", "apd"}));
  simulate->add_option("--out", scenario.out, "Output file");
  simulate->add_option("--format", scenario.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  std::string verify_out = "verify.json";
  int verify_cutoff = 0;
  auto* verify = app.add_subcommand(
      "verify", "Run the cross-module invariant suite (JSON report)");
  verify->add_option("--out", verify_out, "Report file");
  verify->add_option("--cutoff", verify_cutoff,
                     "Force a Fock cutoff into the state-based checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "CATGEN_E_USAGE: " << e.what() << '\n';
    return 1;
  }

  try {
    if (*fig1) return catgen::cli::cmd_fig1(fig1_grid, fig1_out);
    if (*fig2) return catgen::cli::cmd_fig2(fig2_alphas, fig2_out);
    if (*fig4) return catgen::cli::cmd_fig4(fig4_grid, fig4_out);
    if (*simulate) {
      ScenarioConfig config;
      if (!sim_config_path.empty())
        config = catgen::cli::parse_scenario(
            catgen::cli::read_config_file(sim_config_path));
      // Explicit flags override the config file.
      for (const auto& [name, apply] :
           std::vector<std::pair<std::string, std::function<void()>>>{
               {"--scheme", [&] { config.scheme = scenario.scheme; }},
               {"--alpha", [&] { config.alpha = scenario.alpha; }},
               {"--r", [&] { config.r = scenario.r; }},
               {"--t1", [&] { config.t1 = scenario.t1; }},
               {"--t2", [&] { config.t2 = scenario.t2; }},
               {"--t3", [&] { config.t3 = scenario.t3; }},
               {"--beta", [&] { config.beta = scenario.beta; }},
               {"--cutoff", [&] { config.cutoff = scenario.cutoff; }},
               {"--detector", [&] { config.detector = scenario.detector; }},
               {"--out", [&] { config.out = scenario.out; }},
               {"--format", [&] { config.format = scenario.format; }}}) {
        if (simulate->count(name) > 0) apply();
      }
      return catgen::cli::cmd_simulate(config);
    }
    if (*verify) return catgen::cli::cmd_verify(verify_out, verify_cutoff);
  } catch (const catgen::TailTooLarge& e) {
    std::cerr << "CATGEN_E_TAIL: " << e.what()
              << " (raise --cutoff and retry)\n";
    return catgen::cli::kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "CATGEN_E_USAGE: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
