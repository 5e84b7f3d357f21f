#ifndef CATGEN_PIPELINE_HPP
#define CATGEN_PIPELINE_HPP

#include <vector>

#include "catgen/fock.hpp"

// Numerical simulation of the conditional photon-subtraction circuit:
// sequential beam-splitter taps, trigger-arm displacements, detection, and
// the post-selected output. Serves as the independent oracle for every
// closed form in the analytics module.

namespace catgen::pipeline {

using fock::Complex;
using fock::DensityOperator;
using fock::DetectorKind;
using fock::DetectorModel;
using fock::FockCutoff;
using fock::Matrix;
using fock::PureState;
using fock::Vector;

struct CircuitStage {
  double transmissivity = 0.0;    // in (0,1)
  Complex trigger_displacement = 0.0;  // applied to the tapped mode before
                                       // detection
  DetectorModel detector;
};

struct CircuitSpec {
  double squeezing = 0.0;  // r of the input squeezed vacuum, in [0,1)
  std::vector<CircuitStage> stages;  // 1 to 3 stages
  FockCutoff cutoff{1};
};

struct RunResult {
  std::variant<PureState, DensityOperator> output;
  double probability = 0.0;
  std::vector<double> per_stage_probabilities;

  bool is_pure() const { return std::holds_alternative<PureState>(output); }
  const PureState& pure() const { return std::get<PureState>(output); }
  const DensityOperator& mixed() const {
    return std::get<DensityOperator>(output);
  }
};

// The circuit spec realizing three taps with displacements 0, +i sqrt(R2) b,
// -i sqrt(R3) b on the trigger arms, matching the (a^2 - b^2) a subtraction
// operator.
CircuitSpec make_three_stage_spec(double r, double t1, double t2, double t3,
                                  Complex beta, DetectorKind detector,
                                  FockCutoff cutoff);

// Runs the circuit with number-resolving detectors: starts from squeezed
// vacuum, and per stage tensors with vacuum, applies the beam splitter,
// displaces the trigger mode, and projects the trigger on one photon. The
// carried state stays unnormalized so the final norm_sq is the joint
// heralding probability. Throws DomainError if a stage uses a click
// detector, ZeroProbability if the joint probability underflows.
RunResult run_circuit(const CircuitSpec& spec);

// Density-operator path supporting click (APD) detectors: each stage applies
// its Kraus branches and keeps the detected (n >= 1, or exactly 1 for a
// number-resolving stage) components.
RunResult run_circuit_apd(const CircuitSpec& spec);

// Kraus operator K_n of a single tap: project the trigger arm of a
// transmissivity-T beam splitter (with the trigger displaced by d) onto
// exactly n photons. K_0 is the no-click branch.
std::vector<Matrix> stage_kraus_operators(double transmissivity,
                                          Complex trigger_displacement,
                                          FockCutoff cutoff, int max_click);

// Single-stage photon subtraction on a density operator: reflectivity R,
// trigger displaced by i sqrt(R) beta, then detection. First order in R the
// map is proportional to (a + beta) rho (a^dag + beta^*).
struct SubtractResult {
  DensityOperator state;
  double probability = 0.0;
};
SubtractResult kraus_subtract(const DensityOperator& rho, double reflectivity,
                              Complex beta, DetectorModel detector);

// Trace distance between (i) mixing squeezed vacuum with a coherent beam
// |phi> on a transmissivity-tau beam splitter and tracing out the ancilla,
// and (ii) the ideal displacement by i sqrt(1-tau) phi. Tends to zero as
// tau -> 1 with sqrt(1-tau) phi held fixed.
double displacement_limit_check(Complex phi, double tau, double squeezing = 0.5);

// Closed-form operator route for the three-tap number-resolving circuit:
// exp(c a) (a^2 - t2 t3^2 b^2 + (t2-1) t3 b a) a (t1 t2 t3)^{a^dag a} applied
// to squeezed vacuum with the full scalar prefactor, so its norm_sq is the
// heralding probability. Independent cross-check for run_circuit.
PureState three_tap_operator_state(double r, double t1, double t2, double t3,
                                   Complex beta, FockCutoff cutoff);

}  // namespace catgen::pipeline

#endif  // CATGEN_PIPELINE_HPP
