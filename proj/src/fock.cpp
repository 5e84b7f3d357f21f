#include "catgen/fock.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace catgen::fock {

namespace {

constexpr double kZeroNormFloor = 1e-30;

FockCutoff common_cutoff(const PureState& a, const PureState& b) {
  return FockCutoff(std::max(a.cutoff().n_max, b.cutoff().n_max));
}

}  // namespace

PureState::PureState(FockCutoff cutoff, Vector amplitudes)
    : cutoff_(cutoff), amps_(std::move(amplitudes)) {
  if (amps_.size() != cutoff_.dim())
    throw DomainError("PureState: amplitude length does not match cutoff");
  norm_sq_ = amps_.squaredNorm();
}

PureState PureState::normalized() const {
  if (norm_sq_ < kZeroNormFloor)
    throw ZeroNorm("PureState::normalized: norm_sq below 1e-30");
  return PureState(cutoff_, amps_ / std::sqrt(norm_sq_));
}

PureState PureState::padded(FockCutoff target) const {
  if (target.n_max <= cutoff_.n_max) return *this;
  Vector v = Vector::Zero(target.dim());
  v.head(amps_.size()) = amps_;
  return PureState(target, std::move(v));
}

DensityOperator::DensityOperator(FockCutoff cutoff, Matrix matrix)
    : cutoff_(cutoff), mat_(std::move(matrix)) {
  if (mat_.rows() != cutoff_.dim() || mat_.cols() != cutoff_.dim())
    throw DomainError("DensityOperator: matrix size does not match cutoff");
  trace_ = mat_.trace().real();
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator(psi.cutoff(),
                         psi.amplitudes() * psi.amplitudes().adjoint());
}

// ---------------------------------------------------------------------------
// Cutoff policy
// ---------------------------------------------------------------------------

FockCutoff default_cutoff(double alpha_abs, double r) {
  int n = std::max(40, static_cast<int>(
                           std::ceil(alpha_abs * alpha_abs + 8.0 * alpha_abs + 20.0)));
  // Smallest even N with squeezed-vacuum tail below 1e-14.
  if (r > 0.0 && r < 1.0) {
    double p = std::sqrt(1.0 - r * r);  // |c_0|^2
    double tail = 1.0 - p;
    int even_n = 0;
    while (tail >= 1e-14 && even_n < 4000) {
      // |c_{2(m+1)}|^2 / |c_{2m}|^2 = r^2 (2m+1)/(2m+2)
      int m = even_n / 2;
      p *= r * r * (2.0 * m + 1.0) / (2.0 * m + 2.0);
      even_n += 2;
      tail -= p;
    }
    n = std::max(n, even_n);
  }
  if (n % 2 != 0) ++n;
  return FockCutoff(n);
}

int displacement_padding(Complex beta) {
  double b = std::abs(beta);
  return static_cast<int>(std::ceil(4.0 * b * b + 8.0 * b + 10.0));
}

// ---------------------------------------------------------------------------
// State constructors
// ---------------------------------------------------------------------------

PureState vacuum(FockCutoff cutoff) {
  Vector v = Vector::Zero(cutoff.dim());
  v(0) = 1.0;
  return PureState(cutoff, std::move(v));
}

PureState fock_basis_state(int n, FockCutoff cutoff) {
  if (n < 0 || n > cutoff.n_max)
    throw DomainError("fock_basis_state: level outside cutoff");
  Vector v = Vector::Zero(cutoff.dim());
  v(n) = 1.0;
  return PureState(cutoff, std::move(v));
}

PureState coherent_state(Complex alpha, FockCutoff cutoff, double tail_tol) {
  Vector v(cutoff.dim());
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= cutoff.n_max; ++n) {
    v(n) = c;
    c *= alpha / std::sqrt(n + 1.0);
  }
  double kept = v.squaredNorm();
  if (1.0 - kept >= tail_tol)
    throw TailTooLarge("coherent_state: truncation tail too large", 1.0 - kept);
  return PureState(cutoff, v / std::sqrt(kept));
}

PureState squeezed_vacuum(double r, FockCutoff cutoff, double tail_tol) {
  if (r < 0.0 || r >= 1.0)
    throw DomainError("squeezed_vacuum: r must be in [0,1)");
  Vector v = Vector::Zero(cutoff.dim());
  double c = std::pow(1.0 - r * r, 0.25);
  for (int k = 0; 2 * k <= cutoff.n_max; ++k) {
    v(2 * k) = c;
    // c_{2(k+1)} = c_{2k} * r * sqrt((2k+1)/(2k+2))
    c *= r * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
  }
  double kept = v.squaredNorm();
  if (1.0 - kept >= tail_tol)
    throw TailTooLarge("squeezed_vacuum: truncation tail too large", 1.0 - kept);
  return PureState(cutoff, v / std::sqrt(kept));
}

PureState cat_state(Complex alpha, Parity parity, FockCutoff cutoff,
                    double tail_tol) {
  const double a2 = std::norm(alpha);
  const double sign = (parity == Parity::Odd) ? -1.0 : 1.0;
  const double norm_const = 2.0 * (1.0 + sign * std::exp(-2.0 * a2));
  Vector v = Vector::Zero(cutoff.dim());
  Complex c = std::exp(-0.5 * a2);  // coherent amplitude at n = 0
  const int keep_parity = (parity == Parity::Odd) ? 1 : 0;
  for (int n = 0; n <= cutoff.n_max; ++n) {
    if (n % 2 == keep_parity) v(n) = 2.0 * c / std::sqrt(norm_const);
    c *= alpha / std::sqrt(n + 1.0);
  }
  double kept = v.squaredNorm();
  if (1.0 - kept >= tail_tol)
    throw TailTooLarge("cat_state: truncation tail too large", 1.0 - kept);
  return PureState(cutoff, v / std::sqrt(kept));
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

PureState annihilate(const PureState& state) {
  const int dim = state.cutoff().dim();
  Vector v = Vector::Zero(dim);
  for (int n = 0; n + 1 < dim; ++n)
    v(n) = std::sqrt(n + 1.0) * state.amplitude(n + 1);
  return PureState(state.cutoff(), std::move(v));
}

Matrix annihilation_matrix(FockCutoff cutoff) {
  Matrix a = Matrix::Zero(cutoff.dim(), cutoff.dim());
  for (int n = 1; n <= cutoff.n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Matrix displacement_matrix(Complex beta, FockCutoff cutoff) {
  // Generator G = beta a^dag - beta^* a is anti-Hermitian; exponentiate via
  // the Hermitian matrix H = -iG so the result is exactly unitary.
  const int dim = cutoff.dim();
  Matrix h = Matrix::Zero(dim, dim);
  const Complex mi(0.0, -1.0);
  for (int n = 1; n < dim; ++n) {
    h(n, n - 1) = mi * beta * std::sqrt(double(n));
    h(n - 1, n) = std::conj(h(n, n - 1));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(dim);
  for (int k = 0; k < dim; ++k)
    phases(k) = std::exp(Complex(0.0, es.eigenvalues()(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

PureState displace(const PureState& state, Complex beta) {
  FockCutoff target(state.cutoff().n_max + displacement_padding(beta));
  PureState padded = state.padded(target);
  Matrix d = displacement_matrix(beta, target);
  Vector out = d * padded.amplitudes();
  PureState result(target, std::move(out));
  // The truncated exponential is exactly unitary, so truncation error shows
  // up as spurious weight near the top of the padded basis, not as norm loss.
  const int guard = std::max(4, target.dim() / 16);
  const double leakage = result.amplitudes().tail(guard).squaredNorm();
  if (leakage >= 1e-10)
    throw TailTooLarge("displace: truncation leakage too large", leakage);
  return result;
}

namespace {

// exp(i theta H_n) with H_n real symmetric tridiagonal.
Eigen::MatrixXcd block_unitary(int n, double theta) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (int m = 0; m < n; ++m) {
    const double val = std::sqrt((n - m) * (m + 1.0));
    h(m, m + 1) = val;
    h(m + 1, m) = val;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXcd phases(n + 1);
  for (int k = 0; k <= n; ++k)
    phases(k) = std::exp(Complex(0.0, theta * es.eigenvalues()(k)));
  return es.eigenvectors().cast<Complex>() * phases.asDiagonal() *
         es.eigenvectors().transpose().cast<Complex>();
}

}  // namespace

Matrix beam_splitter_block(int total_n, double transmissivity) {
  if (transmissivity <= 0.0 || transmissivity > 1.0)
    throw DomainError("beam_splitter_block: transmissivity must be in (0,1]");
  const double theta =
      std::atan(std::sqrt((1.0 - transmissivity) / transmissivity));
  return block_unitary(total_n, theta);
}

TwoModeState beam_splitter(const PureState& state_a, const PureState& state_b,
                           double transmissivity) {
  if (transmissivity <= 0.0 || transmissivity > 1.0)
    throw DomainError("beam_splitter: transmissivity must be in (0,1]");
  const int na_in = state_a.cutoff().n_max;
  const int nb_in = state_b.cutoff().n_max;
  const int n_out = na_in + nb_in;
  FockCutoff out_cut(n_out);
  Matrix out = Matrix::Zero(n_out + 1, n_out + 1);

  if (transmissivity == 1.0) {
    for (int a = 0; a <= na_in; ++a)
      for (int b = 0; b <= nb_in; ++b)
        out(a, b) = state_a.amplitude(a) * state_b.amplitude(b);
    return TwoModeState{out_cut, out_cut, std::move(out)};
  }

  const double theta =
      std::atan(std::sqrt((1.0 - transmissivity) / transmissivity));
  for (int n = 0; n <= n_out; ++n) {
    Eigen::VectorXcd vin = Eigen::VectorXcd::Zero(n + 1);
    bool any = false;
    for (int m = 0; m <= n; ++m) {
      const int a = n - m;
      if (a <= na_in && m <= nb_in) {
        vin(m) = state_a.amplitude(a) * state_b.amplitude(m);
        if (vin(m) != Complex(0.0)) any = true;
      }
    }
    if (!any) continue;
    Eigen::VectorXcd vout = block_unitary(n, theta) * vin;
    for (int m = 0; m <= n; ++m) out(n - m, m) = vout(m);
  }
  return TwoModeState{out_cut, out_cut, std::move(out)};
}

TwoModeState displace_mode_b(const TwoModeState& joint, Complex beta) {
  Matrix d = displacement_matrix(beta, joint.cutoff_b);
  return TwoModeState{joint.cutoff_a, joint.cutoff_b,
                      joint.amplitudes * d.transpose()};
}

DensityOperator trace_out_b(const TwoModeState& joint) {
  // rho_a = sum_m |col_m><col_m| over the mode-b levels.
  Matrix rho = joint.amplitudes * joint.amplitudes.adjoint();
  return DensityOperator(joint.cutoff_a, std::move(rho));
}

ConditionResult condition_on_detection(const TwoModeState& joint,
                                       DetectorModel detector,
                                       Complex displace_trigger) {
  const TwoModeState* src = &joint;
  TwoModeState displaced{joint.cutoff_a, joint.cutoff_b, Matrix()};
  if (displace_trigger != Complex(0.0)) {
    displaced = displace_mode_b(joint, displace_trigger);
    src = &displaced;
  }
  if (detector.kind == DetectorKind::NumberResolvingOne) {
    PureState branch(src->cutoff_a, src->amplitudes.col(1));
    double p = branch.norm_sq();
    return ConditionResult{std::move(branch), p};
  }
  // ClickApd: sum of the n >= 1 photon-number branches.
  const int dim_a = src->cutoff_a.dim();
  Matrix rho = Matrix::Zero(dim_a, dim_a);
  for (int n = 1; n <= src->cutoff_b.n_max; ++n)
    rho += src->amplitudes.col(n) * src->amplitudes.col(n).adjoint();
  DensityOperator out(src->cutoff_a, std::move(rho));
  double p = out.trace();
  return ConditionResult{std::move(out), p};
}

// ---------------------------------------------------------------------------
// Overlaps
// ---------------------------------------------------------------------------

Complex overlap(const PureState& a, const PureState& b) {
  FockCutoff c = common_cutoff(a, b);
  return a.padded(c).amplitudes().dot(b.padded(c).amplitudes());
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.norm_sq() < kZeroNormFloor || b.norm_sq() < kZeroNormFloor)
    throw ZeroNorm("fidelity: operand norm_sq below 1e-30");
  return std::norm(overlap(a, b)) / (a.norm_sq() * b.norm_sq());
}

double fidelity_mixed(const DensityOperator& rho, const PureState& b) {
  if (rho.trace() < kZeroNormFloor || b.norm_sq() < kZeroNormFloor)
    throw ZeroNorm("fidelity_mixed: operand weight below 1e-30");
  FockCutoff c(std::max(rho.cutoff().n_max, b.cutoff().n_max));
  PureState bp = b.padded(c);
  Matrix m = Matrix::Zero(c.dim(), c.dim());
  m.topLeftCorner(rho.cutoff().dim(), rho.cutoff().dim()) = rho.matrix();
  const Complex val = bp.amplitudes().dot(m * bp.amplitudes());
  return val.real() / (rho.trace() * b.norm_sq());
}

double trace_distance(const DensityOperator& rho,
                      const DensityOperator& sigma) {
  int dim = std::max(rho.cutoff().dim(), sigma.cutoff().dim());
  Matrix diff = Matrix::Zero(dim, dim);
  diff.topLeftCorner(rho.cutoff().dim(), rho.cutoff().dim()) = rho.matrix();
  diff.topLeftCorner(sigma.cutoff().dim(), sigma.cutoff().dim()) -=
      sigma.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace catgen::fock
