#ifndef CATGEN_OPTIMIZE_HPP
#define CATGEN_OPTIMIZE_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "catgen/analytics.hpp"
#include "catgen/errors.hpp"

// Deterministic scalar and small-dimension maximizers plus the parameter
// sweeps behind the figure data. No randomness anywhere: identical inputs
// yield bit-identical reports.

namespace catgen::opt {

struct Bracket {
  double lo = 0.0;
  double hi = 1.0;
  double tolerance = 1e-10;
};

struct ScalarResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

// Golden-section maximization after a 64-point grid pre-pass that selects the
// basin (the objectives here can have two local maxima). Iteration cap 200.
ScalarResult maximize_1d(const std::function<double(double)>& f,
                         const Bracket& bracket);

struct VectorResult {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
};

// Deterministic Nelder-Mead local maximizer (dimension <= 4) with restarts
// until the central-difference gradient (step 1e-6 * scale) has norm below
// 1e-6. Throws NoConvergence after 2000 evaluations.
VectorResult maximize_nd(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, const std::vector<double>& scales);

enum class Scheme {
  OnePhoton,
  ThreePhoton,
  ThreePhotonBetaZero,
  EvenZero,
  EvenTwo,
  SuccessBetaZero,
  SuccessBeta,
};

struct SweepSpec {
  std::vector<double> alpha_grid;  // strictly increasing, all > 0
  Scheme scheme = Scheme::OnePhoton;
  std::map<std::string, double> options;

  // Default alpha grid 0.2..5.0 in steps of 0.05.
  static std::vector<double> default_grid(double lo = 0.2, double hi = 5.0,
                                          double step = 0.05);
};

struct ReportRow {
  double alpha = 0.0;
  double r = 0.0;
  double beta_sq = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  double fidelity = 0.0;
  double probability = 0.0;
  bool converged = false;
  int iterations = 0;
  std::string diagnostic;  // non-empty on per-row failure
};

struct OptimizationReport {
  Scheme scheme;
  std::vector<ReportRow> rows;

  int failed_rows() const;
};

// One report row per alpha; per-row failures are recorded in the row
// diagnostics and never abort the sweep.
OptimizationReport sweep(const SweepSpec& spec);

struct Curve {
  double alpha = 0.0;
  std::vector<double> parameter;  // r or beta, depending on the family
  std::vector<double> fidelity;
  double marker_param = 0.0;  // location of the maximum
  double marker_fidelity = 0.0;
};

struct ToleranceCurves {
  std::vector<Curve> versus_r;     // F3(r) at beta = beta_opt
  std::vector<Curve> versus_beta;  // F3(beta) at r = r3, real beta in
                                   // [0, 2 beta_opt]
};

// Sensitivity of the three-photon fidelity to parameter deviations around
// the optimum, for each requested cat size.
ToleranceCurves tolerance_curves(const std::vector<double>& alphas = {1, 2, 3,
                                                                      4, 5});

struct AmplificationComparison {
  double alpha = 0.0;
  double t1 = 0.0;
  double r = 0.0;
  double probability = 0.0;         // single-tap heralding probability
  double probability_fourfold = 0;  // P^4, four simultaneous initial cats
  double fidelity = 0.0;            // f1 at the fidelity-optimal squeezing
};

// Single-photon-subtraction scheme with one number-resolving detector:
// holds x = r*T1 at the fidelity optimum r1_opt and maximizes the heralding
// probability over T1.
AmplificationComparison amplification_comparison(double alpha_small);

}  // namespace catgen::opt

#endif  // CATGEN_OPTIMIZE_HPP
