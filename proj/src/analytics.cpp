#include "catgen/analytics.hpp"

#include <cmath>

#include "catgen/fock.hpp"
#include "catgen/optimize.hpp"

namespace catgen::analytics {

namespace {

void check_r(double r) {
  if (r < 0.0 || r >= 1.0) throw DomainError("squeezing r must be in [0,1)");
}

void check_alpha(Complex alpha) {
  if (std::abs(alpha) == 0.0)
    throw DomainError("alpha = 0 is degenerate for parameter optimization");
}

constexpr double kSqrt10 = 3.1622776601683795;

double branch_sign(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

}  // namespace

double f1(Complex alpha, double r) {
  check_r(r);
  const double a2 = std::norm(alpha);
  const double re_al2 = (alpha * alpha).real();
  return std::pow(1.0 - r * r, 1.5) * a2 * std::exp(r * re_al2) /
         std::sinh(a2);
}

double r1_opt(Complex alpha) {
  check_alpha(alpha);
  const double a2 = std::norm(alpha);
  return (std::sqrt(9.0 + 4.0 * a2 * a2) - 3.0) / (2.0 * a2);
}

double f3(Complex alpha, double r, Complex beta_sq) {
  check_r(r);
  const double a2 = std::norm(alpha);
  const Complex al2 = alpha * alpha;
  const double r2 = r * r;
  const double omr2 = 1.0 - r2;
  const Complex term = 3.0 * r + r2 * std::conj(al2) - beta_sq;
  // The second factor is the conjugate of the first, so the numerator is
  // |term|^2.
  const double num = std::norm(term);
  const double den = std::norm(beta_sq) -
                     3.0 * 2.0 * beta_sq.real() * r / omr2 +
                     9.0 * r2 / omr2 + 15.0 * r2 * r2 / (omr2 * omr2);
  const double pre =
      std::pow(omr2, 1.5) * a2 * std::exp(r * al2.real()) / std::sinh(a2);
  return num / den * pre;
}

double r3_opt(Complex alpha, Branch branch) {
  check_alpha(alpha);
  const double a2 = std::norm(alpha);
  const double c = 5.0 + branch_sign(branch) * kSqrt10;
  return (std::sqrt(c * c + 4.0 * a2 * a2) - c) / (2.0 * a2);
}

Complex beta_opt_sq(Complex alpha, Branch branch) {
  check_alpha(alpha);
  return 3.0 * alpha * alpha / (7.0 + 2.0 * branch_sign(branch) * kSqrt10);
}

ScalarOptimum f3_beta_zero_opt(Complex alpha) {
  check_alpha(alpha);
  auto result = opt::maximize_1d(
      [alpha](double r) { return f3(alpha, r, 0.0); },
      opt::Bracket{1e-9, 1.0 - 1e-9, 1e-12});
  return ScalarOptimum{result.x, result.fx};
}

double lossy_cat_overlap(Complex alpha, double reflectivity) {
  if (reflectivity < 0.0 || reflectivity >= 1.0)
    throw DomainError("lossy_cat_overlap: R must be in [0,1)");
  const double a2 = std::norm(alpha);
  const double s = std::sinh(a2);
  const double st = std::sinh(std::sqrt(1.0 - reflectivity) * a2);
  return std::cosh(reflectivity * a2) * st * st / (s * s);
}

namespace {

void check_realistic(const RealisticParams& p) {
  check_r(p.r);
  for (double t : {p.t1, p.t2, p.t3})
    if (t <= 0.0 || t >= 1.0)
      throw DomainError("transmissivities must be in (0,1)");
  if (p.x() >= 1.0) throw DomainError("x = r T1 T2 T3 must be below 1");
  // Validity of the closed forms requires the tie R3 = R2/sqrt(T2),
  // equivalently r3^2 = r2^2/t2 in amplitude reflectivities. Every
  // tie-dependent term carries a factor of beta, so at beta = 0 the taps are
  // unconstrained.
  if (std::norm(p.beta) == 0.0) return;
  const double r3_sq = 1.0 - p.t3;
  const double tied = (1.0 - p.t2) / std::sqrt(p.t2);
  if (std::abs(r3_sq - tied) > 1e-12)
    throw ConstraintViolated("R3 = R2/sqrt(T2) tie violated");
}

struct RealisticDenominator {
  double loss_term;   // the (t2-1)^2 t3^2 |beta|^2 term absent from the
                      // ideal three-photon formula
  double rest;        // sum of the remaining terms
};

RealisticDenominator realistic_denominator(double x, double t2_amp,
                                           double t3_amp, Complex beta) {
  const double omx2 = 1.0 - x * x;
  const Complex eff_b2 = t2_amp * t3_amp * t3_amp * beta * beta;
  const double ab2 = std::norm(beta);
  RealisticDenominator d;
  d.loss_term = (t2_amp - 1.0) * (t2_amp - 1.0) * t3_amp * t3_amp * ab2 *
                (1.0 + 2.0 * x * x) / omx2;
  d.rest = std::norm(eff_b2) - 2.0 * eff_b2.real() * 3.0 * x / omx2 +
           9.0 * x * x / omx2 + 15.0 * std::pow(x, 4) / (omx2 * omx2);
  return d;
}

}  // namespace

double f3_realistic(Complex alpha, const RealisticParams& p) {
  check_realistic(p);
  const double x = p.x();
  const double t2 = std::sqrt(p.t2);
  const double t3 = std::sqrt(p.t3);
  const double a2 = std::norm(alpha);
  const Complex al2 = alpha * alpha;
  const Complex eff_b2 = t2 * t3 * t3 * p.beta * p.beta;
  const Complex term = 3.0 * x + x * x * std::conj(al2) - eff_b2;
  const auto den = realistic_denominator(x, t2, t3, p.beta);
  const double pre = std::pow(1.0 - x * x, 1.5) * a2 *
                     std::exp(x * al2.real()) / std::sinh(a2);
  return pre * std::norm(term) / (den.loss_term + den.rest);
}

namespace {

double success_probability_impl(const RealisticParams& p, double exp_sign) {
  check_realistic(p);
  const double x = p.x();
  const double omx2 = 1.0 - x * x;
  const double t1 = std::sqrt(p.t1), t2 = std::sqrt(p.t2),
               t3 = std::sqrt(p.t3);
  const double big_r1 = 1.0 - p.t1, big_r2 = 1.0 - p.t2, big_r3 = 1.0 - p.t3;
  const double ab2 = std::norm(p.beta);
  const Complex b2 = p.beta * p.beta;
  const double t2t3sq = t2 * t3 * t3;
  const double pre = (big_r1 * big_r2 * big_r3) /
                     (t1 * t1 * std::pow(t2, 4) * std::pow(t3, 6)) *
                     std::exp(exp_sign * (big_r2 + big_r3) * ab2) *
                     std::sqrt((1.0 - p.r * p.r) / omx2);
  const double bracket =
      t2t3sq * t2t3sq * ab2 * ab2 * x * x / omx2 +
      (t2 - 1.0) * (t2 - 1.0) * t3 * t3 * ab2 * x * x * (1.0 + 2.0 * x * x) /
          (omx2 * omx2) -
      2.0 * t2t3sq * b2.real() * 3.0 * std::pow(x, 3) / (omx2 * omx2) +
      3.0 * std::pow(x, 4) * (3.0 + 2.0 * x * x) / std::pow(omx2, 3);
  return pre * bracket;
}

}  // namespace

double success_probability(const RealisticParams& p) {
  return success_probability_impl(p, -1.0);
}

double success_probability_as_published(const RealisticParams& p) {
  return success_probability_impl(p, +1.0);
}

double t1_opt(double x, double t2, double t3) {
  for (double v : {x, t2, t3})
    if (v <= 0.0 || v >= 1.0)
      throw DomainError("t1_opt: x, T2, T3 must be in (0,1)");
  const double tt = t2 * t2 * t3 * t3;
  const double t1 =
      (std::sqrt(std::pow(x, 4) + 8.0 * tt * x * x) - x * x) / (2.0 * tt);
  if (t1 <= 0.0 || t1 >= 1.0)
    throw InvalidRegime("t1_opt: optimal T1 outside (0,1)");
  if (x / (t1 * t2 * t3) >= 1.0)
    throw InvalidRegime("t1_opt: implied squeezing r >= 1");
  return t1;
}

TapSelection choose_t2(Complex alpha, double x, Complex beta_target_sq) {
  if (x <= 0.0 || x >= 1.0) throw DomainError("choose_t2: x must be in (0,1)");
  (void)alpha;  // the ratio rule depends only on x and the beta^2 target

  // For a candidate T2 the tie fixes T3 and the beta^2 target fixes |beta|;
  // the defining equation is loss_term = 1e-3 * rest.
  auto ratio_gap = [&](double big_t2) -> double {
    const double t2 = std::sqrt(big_t2);
    const double big_r3 = (1.0 - big_t2) / t2;
    const double big_t3 = 1.0 - big_r3;
    if (big_t3 <= 0.0) return 1e9;
    const double t3 = std::sqrt(big_t3);
    const Complex beta = std::sqrt(beta_target_sq / (t2 * t3 * t3));
    const auto den = realistic_denominator(x, t2, t3, beta);
    return den.loss_term - 1e-3 * den.rest;
  };

  // loss_term vanishes as (t2-1)^2 at T2 -> 1, so a bracket exists near 1;
  // scan downward for the sign change.
  double hi = 1.0 - 1e-12;
  if (ratio_gap(hi) > 0.0)
    throw NoSolution("choose_t2: ratio already above 1e-3 at T2 -> 1");
  double lo = hi;
  bool bracketed = false;
  for (double step = 1e-3; step < 1.0; step *= 2.0) {
    lo = hi - step;
    if (lo <= 0.0) break;
    if (ratio_gap(lo) > 0.0) {
      bracketed = true;
      break;
    }
  }
  if (!bracketed)
    throw NoSolution("choose_t2: 1e-3 ratio unattainable in (0,1)");
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_gap(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  TapSelection sel;
  sel.t2 = 0.5 * (lo + hi);
  const double t2 = std::sqrt(sel.t2);
  sel.t3 = 1.0 - (1.0 - sel.t2) / t2;
  const double t3 = std::sqrt(sel.t3);
  sel.beta = std::sqrt(beta_target_sq / (t2 * t3 * t3));
  return sel;
}

EvenCatOptimum f_even_numeric(Complex alpha, EvenScheme scheme) {
  check_alpha(alpha);
  using namespace catgen::fock;
  const double a = std::abs(alpha);
  // The bare-squeezed-vacuum optimum needs r close to 1 for large cats, so
  // size the basis for the top of the search bracket.
  const double r_max = 0.985;
  const FockCutoff cutoff = default_cutoff(a, r_max);
  const PureState cat = cat_state(a, Parity::Even, cutoff, 1e-10);

  EvenCatOptimum out;
  if (scheme == EvenScheme::Zero) {
    auto res = opt::maximize_1d(
        [&](double r) {
          return fidelity(squeezed_vacuum(r, cutoff), cat);
        },
        opt::Bracket{1e-9, r_max, 1e-12});
    out.r = res.x;
    out.fidelity = res.fx;
    return out;
  }

  // F2: fidelity of (a^2 - beta^2)|sq> against the even cat, over (r, beta^2).
  auto objective = [&](const std::vector<double>& v) -> double {
    const double r = v[0], b2 = v[1];
    if (r <= 0.0 || r >= r_max) return -1.0;
    const PureState sq = squeezed_vacuum(r, cutoff);
    const Vector w = annihilate(annihilate(sq)).amplitudes() -
                     Complex(b2) * sq.amplitudes();
    const PureState candidate(cutoff, w);
    if (candidate.norm_sq() < 1e-30) return -1.0;
    return fidelity(candidate, cat);
  };
  // The surface has a spurious basin at large beta^2 (where the subtraction
  // degenerates to the identity); a coarse grid pre-pass picks the basin of
  // the true optimum before the simplex polish.
  std::vector<double> best_start = {0.5, 0.5 * a * a};
  double best_grid = -1.0;
  for (int i = 0; i <= 15; ++i) {
    const double r = 0.05 + 0.9 * i / 15.0;
    for (int j = 0; j <= 15; ++j) {
      const double b2 = 1.2 * a * a * j / 15.0;
      const double f = objective({r, b2});
      if (f > best_grid) {
        best_grid = f;
        best_start = {r, b2};
      }
    }
  }
  auto res = opt::maximize_nd(objective, best_start,
                              {0.02, 0.02 * std::max(0.2, a * a)});
  out.r = res.x[0];
  out.beta_sq = res.x[1];
  out.fidelity = res.fx;
  return out;
}

}  // namespace catgen::analytics
