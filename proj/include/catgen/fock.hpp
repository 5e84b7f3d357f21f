#ifndef CATGEN_FOCK_HPP
#define CATGEN_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <variant>

#include "catgen/errors.hpp"

// Truncated single-mode Fock space: states, the bosonic operators used by the
// cat-generation circuit (annihilation, displacement, beam splitter), and
// overlaps. All types are immutable values; all operations are pure functions.

namespace catgen::fock {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Highest retained Fock level; basis size is n_max + 1.
struct FockCutoff {
  int n_max;

  explicit FockCutoff(int n) : n_max(n) {
    if (n < 1) throw DomainError("FockCutoff: n_max must be >= 1");
  }
  int dim() const { return n_max + 1; }
  bool operator==(const FockCutoff&) const = default;
};

// Amplitude vector over the truncated Fock basis with cached squared norm.
// A conditional (post-selected) state carries its branch probability in
// norm_sq rather than in a separate field, so sequential conditioning
// multiplies weights automatically.
class PureState {
 public:
  PureState(FockCutoff cutoff, Vector amplitudes);

  const FockCutoff& cutoff() const { return cutoff_; }
  const Vector& amplitudes() const { return amps_; }
  double norm_sq() const { return norm_sq_; }
  Complex amplitude(int n) const { return amps_(n); }

  bool is_normalized(double tol = 1e-10) const {
    return std::abs(norm_sq_ - 1.0) < tol;
  }
  PureState normalized() const;
  // Zero-pad to a larger cutoff (no-op if already at least as large).
  PureState padded(FockCutoff target) const;

 private:
  FockCutoff cutoff_;
  Vector amps_;
  double norm_sq_;
};

// Hermitian positive-semidefinite operator on the truncated basis; sub-unit
// trace encodes branch probability.
class DensityOperator {
 public:
  DensityOperator(FockCutoff cutoff, Matrix matrix);
  static DensityOperator from_pure(const PureState& psi);

  const FockCutoff& cutoff() const { return cutoff_; }
  const Matrix& matrix() const { return mat_; }
  double trace() const { return trace_; }

 private:
  FockCutoff cutoff_;
  Matrix mat_;
  double trace_;
};

// Amplitude tensor over a pair of truncated Fock bases, indexed (n_a, n_b).
// Transient representation inside beam-splitter application.
struct TwoModeState {
  FockCutoff cutoff_a;
  FockCutoff cutoff_b;
  Matrix amplitudes;  // rows: n_a, cols: n_b

  double norm_sq() const { return amplitudes.squaredNorm(); }
};

enum class DetectorKind {
  NumberResolvingOne,  // projects onto exactly one photon -> pure branch
  ClickApd,            // any n >= 1 -> mixture of photon-number branches
};

struct DetectorModel {
  DetectorKind kind = DetectorKind::NumberResolvingOne;
};

// Either a pure conditional state or a click-detector mixture, with the
// heralding probability.
struct ConditionResult {
  std::variant<PureState, DensityOperator> state;
  double probability = 0.0;
};

// ---------------------------------------------------------------------------
// Cutoff policy
// ---------------------------------------------------------------------------

// Default cutoff guaranteeing ~1e-9 convergence of fidelities and
// probabilities for |alpha| <= 5, r <= 0.9 without per-call tuning.
FockCutoff default_cutoff(double alpha_abs, double r);

// Extra levels needed to absorb the support shift of a displacement.
int displacement_padding(Complex beta);

// ---------------------------------------------------------------------------
// State constructors
// ---------------------------------------------------------------------------

PureState vacuum(FockCutoff cutoff);
PureState fock_basis_state(int n, FockCutoff cutoff);

// Coherent state |alpha> expanded in the truncated basis and renormalized.
// Throws TailTooLarge if the discarded probability is >= tail_tol.
PureState coherent_state(Complex alpha, FockCutoff cutoff,
                         double tail_tol = 1e-12);

// Squeezed vacuum with amplitudes c_{2n} = (1-r^2)^{1/4}
// sqrt((2n)!/(2^{2n} n!^2)) r^n on the even levels. 0 <= r < 1.
PureState squeezed_vacuum(double r, FockCutoff cutoff, double tail_tol = 1e-12);

enum class Parity { Odd, Even };

// Normalized (|alpha> +- |-alpha>)/sqrt(2(1 +- e^{-2|alpha|^2})). The odd cat
// populates only odd levels, the even cat only even levels (exactly).
PureState cat_state(Complex alpha, Parity parity, FockCutoff cutoff,
                    double tail_tol = 1e-12);

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

// b_n = sqrt(n+1) a_{n+1}; unnormalized, norm_sq equals <n> of the input.
PureState annihilate(const PureState& state);

// Matrix of the annihilation operator on the truncated basis.
Matrix annihilation_matrix(FockCutoff cutoff);

// Unitary displacement matrix exp(beta a^dag - beta^* a) on the truncated
// basis (matrix exponential of the truncated generator).
Matrix displacement_matrix(Complex beta, FockCutoff cutoff);

// Displaces the state, padding the cutoff for the support shift. Throws
// TailTooLarge if the post-displacement leakage is >= 1e-10.
PureState displace(const PureState& state, Complex beta);

// exp(i atan(sqrt((1-T)/T)) H_n) on a single total-photon-number block,
// where H_n is a^dag b + a b^dag restricted to the basis |n-m>_a |m>_b,
// m = 0..n. The generator conserves n_a + n_b, so the full beam splitter is
// block diagonal in these subspaces.
Matrix beam_splitter_block(int total_n, double transmissivity);

// Two-mode beam splitter exp(i atan(sqrt((1-T)/T)) (a^dag b + a b^dag)),
// applied exactly on each total-photon-number block. Output cutoffs are
// (Na + Nb) on both axes so no photon-number block is truncated.
TwoModeState beam_splitter(const PureState& state_a, const PureState& state_b,
                           double transmissivity);

// Displaces mode b of a two-mode state (unitary on the b axis).
TwoModeState displace_mode_b(const TwoModeState& joint, Complex beta);

// Trace out mode b, yielding the reduced density operator of mode a.
DensityOperator trace_out_b(const TwoModeState& joint);

// Applies the trigger displacement to mode b, then detects mode b.
// NumberResolvingOne returns the unnormalized pure state <1|_b D_b |joint>
// with probability equal to its norm_sq; ClickApd returns the sum of the
// n >= 1 branches as a density operator with probability equal to its trace.
ConditionResult condition_on_detection(const TwoModeState& joint,
                                       DetectorModel detector,
                                       Complex displace_trigger = 0.0);

// ---------------------------------------------------------------------------
// Overlaps
// ---------------------------------------------------------------------------

// |<a|b>|^2 / (|a|^2 |b|^2); operands are normalized internally.
// Throws ZeroNorm if an operand has norm_sq < 1e-30.
double fidelity(const PureState& a, const PureState& b);

// <b|rho|b> / (tr rho * |b|^2).
double fidelity_mixed(const DensityOperator& rho, const PureState& b);

Complex overlap(const PureState& a, const PureState& b);

// Trace distance (1/2)||rho - sigma||_1 between density operators.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

}  // namespace catgen::fock

#endif  // CATGEN_FOCK_HPP
