#ifndef CATGEN_CLI_CORE_HPP
#define CATGEN_CLI_CORE_HPP

#include <map>
#include <string>
#include <vector>

// Command implementations behind the command-line tool: figure-data CSV
// emitters, the scenario simulator, and the self-verification suite. Kept in
// the library so tests can drive them without spawning processes.

namespace catgen::cli {

// Exit codes shared by all commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitSweepDegraded = 2;
inline constexpr int kExitPrecondition = 3;

struct GridOptions {
  double alpha_min = 0.2;
  double alpha_max = 5.0;
  double alpha_step = 0.05;
};

// Scenario for the `simulate` command. NaN parameter fields mean "derive from
// alpha": the three-tap chain is completed from the ideal optimum targets.
struct ScenarioConfig {
  std::string scheme = "three-tap";  // "three-tap" or "single-tap"
  double alpha = 2.449489742783178;
  double r = kUnset;
  double t1 = kUnset, t2 = kUnset, t3 = kUnset;
  double beta = kUnset;  // real trigger displacement scale
  int cutoff = 0;        // 0 = automatic
  std::string detector = "nr1";  // "nr1" or "apd"
  std::string out = "simulate.json";
  std::string format = "json";  // "json" or "csv"

  static constexpr double kUnset = -1e308;
  static bool is_set(double v) { return v != kUnset; }
};

// Flat key=value config parsing with a strict schema: unknown keys and
// out-of-range values throw DomainError.
std::map<std::string, std::string> read_config_file(const std::string& path);
ScenarioConfig parse_scenario(const std::map<std::string, std::string>& kv);

// Fixed numeric formatting for CSV output: 12 significant digits, '.'
// decimal separator, no locale dependence.
std::string format_number(double v);

// Writes fig1_fidelity.csv (alpha,F0,F1,F2,F3,F3_beta0) and
// fig1_squeezing.csv (alpha,r1,r3,r3_beta0) into out_dir.
int cmd_fig1(const GridOptions& grid, const std::string& out_dir);

// Writes per-alpha sensitivity curves fig2_vs_r_alpha*.csv and
// fig2_vs_beta_alpha*.csv plus fig2_markers.csv into out_dir.
int cmd_fig2(const std::vector<double>& alphas, const std::string& out_dir);

// Writes fig4_probability.csv (alpha,P) for the beta = 0 scheme.
int cmd_fig4(const GridOptions& grid, const std::string& out_dir);

// Runs the conditional circuit for the scenario and writes a JSON (or
// key,value CSV) report with simulated and closed-form figures of merit.
int cmd_simulate(const ScenarioConfig& config);

// Runs the cross-module invariant suite and writes a pass/fail JSON report.
// cutoff_override > 0 forces that basis size into the state-based checks
// (useful for demonstrating the truncation guards).
int cmd_verify(const std::string& out_path, int cutoff_override = 0);

}  // namespace catgen::cli

#endif  // CATGEN_CLI_CORE_HPP
