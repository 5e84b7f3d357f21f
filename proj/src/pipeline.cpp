#include "catgen/pipeline.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>

namespace catgen::pipeline {

namespace {

constexpr double kZeroProbabilityFloor = 1e-300;

int trigger_cutoff(Complex displacement) {
  return std::min(32, std::max(10, fock::displacement_padding(displacement)));
}

// One number-resolving stage on an (unnormalized) pure signal state. The
// signal cannot gain photons, so the output is exact on the input cutoff.
PureState pure_stage(const PureState& psi, const CircuitStage& stage) {
  const FockCutoff nb(trigger_cutoff(stage.trigger_displacement));
  const auto joint =
      fock::beam_splitter(psi, fock::vacuum(nb), stage.transmissivity);
  auto cond = fock::condition_on_detection(joint, stage.detector,
                                           stage.trigger_displacement);
  const PureState& wide = std::get<PureState>(cond.state);
  return PureState(psi.cutoff(),
                   wide.amplitudes().head(psi.cutoff().dim()));
}

}  // namespace

CircuitSpec make_three_stage_spec(double r, double t1, double t2, double t3,
                                  Complex beta, DetectorKind detector,
                                  FockCutoff cutoff) {
  const Complex i(0.0, 1.0);
  CircuitSpec spec;
  spec.squeezing = r;
  spec.cutoff = cutoff;
  DetectorModel model{detector};
  spec.stages = {
      {t1, 0.0, model},
      {t2, i * std::sqrt(1.0 - t2) * beta, model},
      {t3, -i * std::sqrt(1.0 - t3) * beta, model},
  };
  return spec;
}

RunResult run_circuit(const CircuitSpec& spec) {
  if (spec.stages.empty() || spec.stages.size() > 3)
    throw DomainError("run_circuit: 1 to 3 stages supported");
  for (const auto& stage : spec.stages) {
    if (stage.detector.kind != DetectorKind::NumberResolvingOne)
      throw DomainError("run_circuit: click detectors require run_circuit_apd");
    if (stage.transmissivity <= 0.0 || stage.transmissivity >= 1.0)
      throw DomainError("run_circuit: transmissivity must be in (0,1)");
  }
  PureState psi = fock::squeezed_vacuum(spec.squeezing, spec.cutoff);
  RunResult result{psi, 1.0, {}};
  for (const auto& stage : spec.stages) {
    const double before = psi.norm_sq();
    psi = pure_stage(psi, stage);
    if (psi.norm_sq() < kZeroProbabilityFloor)
      throw ZeroProbability("run_circuit: joint probability underflow");
    result.per_stage_probabilities.push_back(psi.norm_sq() / before);
  }
  result.probability = psi.norm_sq();
  result.output = std::move(psi);
  return result;
}

std::vector<Matrix> stage_kraus_operators(double transmissivity,
                                          Complex trigger_displacement,
                                          FockCutoff cutoff, int max_click) {
  const int dim = cutoff.dim();
  const int nb = std::max(max_click, trigger_cutoff(trigger_displacement));

  // Beam-splitter part: reflecting m photons out of the |a, 0> block takes
  // amplitude (U_a)_{m,0} from level a to level a - m.
  std::vector<Matrix> bs(nb + 1, Matrix::Zero(dim, dim));
  for (int a = 0; a < dim; ++a) {
    const auto block = fock::beam_splitter_block(a, transmissivity);
    for (int m = 0; m <= std::min(a, nb); ++m)
      bs[m](a - m, a) = block(m, 0);
  }

  std::vector<Matrix> kraus(max_click + 1, Matrix::Zero(dim, dim));
  if (trigger_displacement == Complex(0.0)) {
    for (int n = 0; n <= max_click; ++n) kraus[n] = bs[n];
    return kraus;
  }
  const Matrix d = fock::displacement_matrix(trigger_displacement,
                                             FockCutoff(nb));
  for (int n = 0; n <= max_click; ++n)
    for (int m = 0; m <= nb; ++m)
      if (d(n, m) != Complex(0.0)) kraus[n] += d(n, m) * bs[m];
  return kraus;
}

namespace {

SubtractResult density_stage(const DensityOperator& rho,
                             const CircuitStage& stage, int max_click) {
  const auto kraus =
      stage_kraus_operators(stage.transmissivity, stage.trigger_displacement,
                            rho.cutoff(), max_click);
  Matrix out = Matrix::Zero(rho.cutoff().dim(), rho.cutoff().dim());
  const int n_lo = 1;
  const int n_hi =
      stage.detector.kind == DetectorKind::NumberResolvingOne ? 1 : max_click;
  for (int n = n_lo; n <= n_hi; ++n)
    out += kraus[n] * rho.matrix() * kraus[n].adjoint();
  DensityOperator state(rho.cutoff(), std::move(out));
  const double p = state.trace() / rho.trace();
  return SubtractResult{std::move(state), p};
}

}  // namespace

RunResult run_circuit_apd(const CircuitSpec& spec) {
  if (spec.stages.empty() || spec.stages.size() > 3)
    throw DomainError("run_circuit_apd: 1 to 3 stages supported");
  constexpr int kMaxClick = 12;
  DensityOperator rho = DensityOperator::from_pure(
      fock::squeezed_vacuum(spec.squeezing, spec.cutoff));
  RunResult result{rho, 1.0, {}};
  for (const auto& stage : spec.stages) {
    if (stage.transmissivity <= 0.0 || stage.transmissivity >= 1.0)
      throw DomainError("run_circuit_apd: transmissivity must be in (0,1)");
    auto sub = density_stage(rho, stage, kMaxClick);
    rho = std::move(sub.state);
    if (rho.trace() < kZeroProbabilityFloor)
      throw ZeroProbability("run_circuit_apd: joint probability underflow");
    result.per_stage_probabilities.push_back(sub.probability);
  }
  result.probability = rho.trace();
  result.output = std::move(rho);
  return result;
}

SubtractResult kraus_subtract(const DensityOperator& rho, double reflectivity,
                              Complex beta, DetectorModel detector) {
  if (reflectivity <= 0.0 || reflectivity >= 1.0)
    throw DomainError("kraus_subtract: R must be in (0,1)");
  const Complex i(0.0, 1.0);
  CircuitStage stage{1.0 - reflectivity, i * std::sqrt(reflectivity) * beta,
                     detector};
  return density_stage(rho, stage, 12);
}

double displacement_limit_check(Complex phi, double tau, double squeezing) {
  if (tau <= 0.0 || tau >= 1.0)
    throw DomainError("displacement_limit_check: tau must be in (0,1)");
  const Complex i(0.0, 1.0);
  const Complex target_amp = i * std::sqrt(1.0 - tau) * phi;
  const FockCutoff cutoff(
      fock::default_cutoff(0.0, squeezing).n_max +
      fock::displacement_padding(target_amp));
  const int dim = cutoff.dim();
  const PureState sq = fock::squeezed_vacuum(squeezing, cutoff);

  // Coherent-mixing route, with the ancilla integrated out exactly:
  // sqrt(tau)^{a^dag a} E [sum_n (1-tau)^n/n! a^n rho a^dag^n] E^dag
  // sqrt(tau)^{a^dag a}, E = exp(-zeta^* phi a^dag + tau zeta phi^* a),
  // zeta = i sqrt((1-tau)/tau).
  const Complex zeta = i * std::sqrt((1.0 - tau) / tau);
  const Matrix a = fock::annihilation_matrix(cutoff);
  const Matrix gen = -std::conj(zeta) * phi * a.adjoint() +
                     tau * zeta * std::conj(phi) * a;
  const Matrix e = gen.exp();
  Vector scale(dim);
  for (int n = 0; n < dim; ++n) scale(n) = std::pow(tau, 0.5 * n);

  Matrix rho_mix = Matrix::Zero(dim, dim);
  Vector branch = sq.amplitudes();
  double weight = 1.0;
  for (int n = 0; n < dim; ++n) {
    const Vector w = scale.asDiagonal() * (e * branch) * std::sqrt(weight);
    rho_mix += w * w.adjoint();
    if (weight * branch.squaredNorm() < 1e-30) break;
    branch = a * branch;
    weight *= (1.0 - tau) / (n + 1.0);
  }

  const PureState displaced(
      cutoff, (fock::displacement_matrix(target_amp, cutoff) *
               sq.amplitudes()));
  return fock::trace_distance(DensityOperator(cutoff, rho_mix),
                              DensityOperator::from_pure(displaced));
}

PureState three_tap_operator_state(double r, double t1, double t2, double t3,
                                   Complex beta, FockCutoff cutoff) {
  const double ta1 = std::sqrt(t1), ta2 = std::sqrt(t2), ta3 = std::sqrt(t3);
  const double ra1 = std::sqrt(1.0 - t1), ra2 = std::sqrt(1.0 - t2),
               ra3 = std::sqrt(1.0 - t3);
  const PureState sq = fock::squeezed_vacuum(r, cutoff);
  const int dim = cutoff.dim();

  Vector v(dim);
  for (int n = 0; n < dim; ++n)
    v(n) = std::pow(ta1 * ta2 * ta3, n) * sq.amplitude(n);

  auto lower = [dim](const Vector& u) {
    Vector w = Vector::Zero(dim);
    for (int n = 0; n + 1 < dim; ++n) w(n) = std::sqrt(n + 1.0) * u(n + 1);
    return w;
  };

  v = lower(v);
  const Vector av = lower(v);
  v = lower(av) - ta2 * ta3 * ta3 * beta * beta * v +
      (ta2 - 1.0) * ta3 * beta * av;

  // exp(c a) by series; c is small on the tied parameter family.
  const Complex c = (ra2 * ra2 / ta2 - ra3 * ra3) * std::conj(beta) / ta3;
  Vector sum = v;
  Vector term = v;
  for (int k = 1; k <= 200; ++k) {
    term = (c / double(k)) * lower(term);
    sum += term;
    if (term.squaredNorm() < 1e-40 * sum.squaredNorm()) break;
  }

  const Complex prefactor =
      Complex(0.0, -1.0) * (ra1 * ra2 * ra3) / (ta1 * ta2 * ta2 * ta3 * ta3 * ta3) *
      std::exp(-0.5 * (ra2 * ra2 + ra3 * ra3) * std::norm(beta));
  return PureState(cutoff, prefactor * sum);
}

}  // namespace catgen::pipeline
