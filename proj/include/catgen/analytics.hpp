#ifndef CATGEN_ANALYTICS_HPP
#define CATGEN_ANALYTICS_HPP

#include <complex>

#include "catgen/errors.hpp"

// Closed-form fidelities, optimal parameters, and success probabilities for
// cat-state generation by one- and three-photon subtraction from squeezed
// vacuum, including the finite-reflectivity (realistic) circuit.

namespace catgen::analytics {

using Complex = std::complex<double>;

enum class CatParity { Odd, Even };

struct CatTarget {
  Complex alpha;
  CatParity parity = CatParity::Odd;
};

// The three-photon optimum has two stationary branches; Plus is the global
// maximum, Minus the second local maximum.
enum class Branch { Plus, Minus };

struct ThreePhotonParams {
  double r = 0.0;        // squeezing, in [0,1)
  Complex beta_sq = 0.0; // beta^2
  Branch branch = Branch::Plus;
};

// Circuit parameters of the three-tap scheme. x = r*T1*T2*T3 is the
// effective squeezing seen by the heralded output.
struct RealisticParams {
  double r = 0.0;
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;  // transmissivities T1..T3
  Complex beta = 0.0;

  double x() const { return r * t1 * t2 * t3; }
};

// Odd-cat fidelity after a single photon subtraction:
// (1-r^2)^{3/2} |alpha|^2 e^{r Re(alpha^2)} / sinh(|alpha|^2).
double f1(Complex alpha, double r);

// Squeezing maximizing f1: (sqrt(9+4a^4)-3)/(2a^2) for real a = |alpha|.
double r1_opt(Complex alpha);

// Odd-cat fidelity after subtraction of three photons with a free beta^2.
double f3(Complex alpha, double r, Complex beta_sq);

// Squeezing and beta^2 maximizing f3 (Plus branch), or the second local
// maximum (Minus branch, sqrt(10) -> -sqrt(10)).
double r3_opt(Complex alpha, Branch branch = Branch::Plus);
Complex beta_opt_sq(Complex alpha, Branch branch = Branch::Plus);

struct ScalarOptimum {
  double argmax = 0.0;
  double value = 0.0;
};

// Maximum of f3 with beta = 0 over r, found numerically.
ScalarOptimum f3_beta_zero_opt(Complex alpha);

// Overlap of a size-|alpha| odd cat with itself after a reflectivity-R
// beam-splitter loss: cosh(R|a|^2) sinh^2(sqrt(1-R)|a|^2) / sinh^2(|a|^2).
double lossy_cat_overlap(Complex alpha, double reflectivity);

// Odd-cat fidelity of the finite-reflectivity three-tap circuit, valid on
// the tied family R3 = R2/sqrt(T2). Throws ConstraintViolated otherwise.
double f3_realistic(Complex alpha, const RealisticParams& p);

// Heralding probability of three single-photon detections in the three-tap
// circuit on squeezed-vacuum input (same tied family as f3_realistic).
//
// The closed form carries the factor e^{-(R2+R3)|beta|^2} from the
// single-photon projections of the displaced trigger modes; with this sign
// the expression matches the simulated circuit to machine precision.
double success_probability(const RealisticParams& p);

// Same expression with the exponential factor e^{+(R2+R3)|beta|^2}; kept for
// comparison against previously published values of the beta != 0 scheme.
double success_probability_as_published(const RealisticParams& p);

// T1 maximizing the success probability for fixed x, T2, T3:
// (sqrt(x^4 + 8 T2^2 T3^2 x^2) - x^2)/(2 T2^2 T3^2).
// Throws InvalidRegime if the implied r = x/(T1 T2 T3) >= 1 or T1 is not in
// (0,1).
double t1_opt(double x, double t2, double t3);

struct TapSelection {
  double t2 = 0.0;
  double t3 = 0.0;
  Complex beta = 0.0;
};

// Selects T2 so that the loss-induced denominator term of f3_realistic is
// 1e-3 of the sum of the other terms, with T3 tied by R3 = R2/sqrt(T2) and
// beta rescaled so that t2 t3^2 beta^2 equals beta_target_sq. Solved by
// bisection to 1e-12.
TapSelection choose_t2(Complex alpha, double x, Complex beta_target_sq);

enum class EvenScheme { Zero, Two };  // bare squeezed vacuum / two subtractions

struct EvenCatOptimum {
  double r = 0.0;
  double beta_sq = 0.0;  // unused for EvenScheme::Zero
  double fidelity = 0.0;
};

// Even-cat fidelities F0 = max_r |<cat+|sq(r)>|^2 and
// F2 = max_{r,beta^2} of (a^2 - beta^2)|sq> against the even cat. No closed
// form exists for these; they are defined operationally through the numeric
// optimizer on truncated Fock states.
EvenCatOptimum f_even_numeric(Complex alpha, EvenScheme scheme);

}  // namespace catgen::analytics

#endif  // CATGEN_ANALYTICS_HPP
