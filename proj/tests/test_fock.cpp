#include "catgen/fock.hpp"

#include <cmath>
#include <complex>

#include "doctest.h"

using namespace catgen;
using namespace catgen::fock;

namespace {

const Complex kI(0.0, 1.0);

// Independent coefficient oracle for the squeezed vacuum: exact factorial
// arithmetic, no shared code with the recurrence in the implementation.
double squeezed_coeff_oracle(double r, int two_n) {
  const int n = two_n / 2;
  long double fact_2n = 1.0L, fact_n = 1.0L;
  for (int k = 2; k <= two_n; ++k) fact_2n *= k;
  for (int k = 2; k <= n; ++k) fact_n *= k;
  const long double ratio =
      fact_2n / (powl(2.0L, 2 * n) * fact_n * fact_n);
  return std::pow(1.0 - r * r, 0.25) * std::sqrt(double(ratio)) *
         std::pow(r, n);
}

}  // namespace

TEST_CASE("squeezed vacuum coefficients") {
  SUBCASE("r = 0 is the vacuum") {
    auto s = squeezed_vacuum(0.0, FockCutoff(10));
    CHECK(std::abs(s.amplitude(0) - 1.0) < 1e-15);
    CHECK(s.amplitudes().tail(10).norm() == 0.0);
  }
  SUBCASE("r = 0.5 matches the factorial oracle") {
    auto s = squeezed_vacuum(0.5, FockCutoff(40));
    CHECK(std::abs(s.amplitude(0)) ==
          doctest::Approx(squeezed_coeff_oracle(0.5, 0)).epsilon(1e-12));
    CHECK(std::abs(s.amplitude(2)) ==
          doctest::Approx(squeezed_coeff_oracle(0.5, 2)).epsilon(1e-12));
    CHECK(std::abs(s.amplitude(10)) ==
          doctest::Approx(squeezed_coeff_oracle(0.5, 10)).epsilon(1e-12));
    CHECK(std::abs(s.amplitude(0)) == doctest::Approx(0.9306).epsilon(1e-4));
    CHECK(std::abs(s.amplitude(2)) == doctest::Approx(0.3290).epsilon(1e-3));
    // odd entries exactly zero
    for (int n = 1; n <= 39; n += 2) CHECK(s.amplitude(n) == Complex(0.0));
  }
  SUBCASE("heavy tail at near-unit squeezing") {
    CHECK_THROWS_AS(squeezed_vacuum(0.99, FockCutoff(10)), TailTooLarge);
  }
  SUBCASE("r outside [0,1) rejected") {
    CHECK_THROWS_AS(squeezed_vacuum(1.0, FockCutoff(10)), DomainError);
    CHECK_THROWS_AS(squeezed_vacuum(-0.1, FockCutoff(10)), DomainError);
  }
}

TEST_CASE("cat states") {
  SUBCASE("small-alpha odd cat approaches the single photon") {
    auto cat = cat_state(1e-6, Parity::Odd, FockCutoff(20));
    auto one = fock_basis_state(1, FockCutoff(20));
    CHECK(fidelity(cat, one) > 1.0 - 1e-9);
  }
  SUBCASE("odd cat populates only odd levels and is normalized") {
    auto cat = cat_state(std::sqrt(6.0), Parity::Odd, FockCutoff(60));
    for (int n = 0; n <= 60; n += 2) CHECK(cat.amplitude(n) == Complex(0.0));
    CHECK(cat.is_normalized());
  }
  SUBCASE("even cat amplitude ratio matches the coherent expansion") {
    // c2/c0 of the even cat equals the coherent-state ratio alpha^2/sqrt(2),
    // independent of the cat normalization.
    auto cat = cat_state(2.0, Parity::Even, FockCutoff(60));
    const Complex ratio = cat.amplitude(2) / cat.amplitude(0);
    CHECK(std::abs(ratio - Complex(4.0 / std::sqrt(2.0))) < 1e-12);
  }
}

TEST_CASE("annihilation") {
  SUBCASE("kills the vacuum") {
    auto out = annihilate(vacuum(FockCutoff(10)));
    CHECK(out.norm_sq() == 0.0);
  }
  SUBCASE("lowers |1> to |0>") {
    auto out = annihilate(fock_basis_state(1, FockCutoff(10)));
    CHECK(std::abs(out.amplitude(0) - 1.0) < 1e-15);
    CHECK(out.norm_sq() == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("norm_sq equals the mean photon number") {
    auto out = annihilate(squeezed_vacuum(0.3, FockCutoff(40)));
    CHECK(out.norm_sq() == doctest::Approx(0.09 / 0.91).epsilon(1e-12));
  }
  SUBCASE("maps even squeezed support to exactly odd support") {
    auto out = annihilate(squeezed_vacuum(0.6, FockCutoff(80)));
    for (int n = 0; n <= 80; n += 2) CHECK(out.amplitude(n) == Complex(0.0));
  }
}

TEST_CASE("displacement") {
  SUBCASE("beta = 0 is the identity") {
    auto s = squeezed_vacuum(0.4, FockCutoff(40));
    auto d = displace(s, 0.0);
    CHECK((d.amplitudes().head(41) - s.amplitudes()).norm() < 1e-12);
  }
  SUBCASE("vacuum displaces to the coherent state") {
    auto d = displace(vacuum(FockCutoff(20)), 1.2);
    for (int n = 0; n <= 10; ++n) {
      long double fact = 1.0L;
      for (int k = 2; k <= n; ++k) fact *= k;
      const double expected =
          std::exp(-0.72) * std::pow(1.2, n) / std::sqrt(double(fact));
      CHECK(std::abs(d.amplitude(n) - Complex(expected)) < 1e-10);
    }
  }
  SUBCASE("inverse displacement restores the state") {
    auto s = squeezed_vacuum(0.5, FockCutoff(40));
    auto back = displace(displace(s, Complex(0.7, -0.4)), Complex(-0.7, 0.4));
    CHECK((back.amplitudes().head(41) - s.amplitudes()).norm() < 1e-9);
  }
  SUBCASE("norm preserved") {
    auto d = displace(squeezed_vacuum(0.5, FockCutoff(40)), Complex(0.3, 1.1));
    CHECK(std::abs(d.norm_sq() - 1.0) < 1e-10);
  }
}

TEST_CASE("beam splitter") {
  SUBCASE("T = 1 leaves a product state unchanged") {
    auto a = squeezed_vacuum(0.4, FockCutoff(40));
    auto b = vacuum(FockCutoff(4));
    auto joint = beam_splitter(a, b, 1.0);
    for (int n = 0; n <= 20; ++n)
      CHECK(std::abs(joint.amplitudes(n, 0) - a.amplitude(n)) < 1e-14);
    CHECK(std::abs(joint.norm_sq() - 1.0) < 1e-12);
  }
  SUBCASE("single photon splits as (sqrt(T), i sqrt(1-T))") {
    auto joint = beam_splitter(fock_basis_state(1, FockCutoff(2)),
                               vacuum(FockCutoff(2)), 0.5);
    CHECK(std::abs(joint.amplitudes(1, 0) - Complex(1.0 / std::sqrt(2.0))) <
          1e-12);
    CHECK(std::abs(joint.amplitudes(0, 1) - kI / std::sqrt(2.0)) < 1e-12);
  }
  SUBCASE("coherent inputs stay product coherent states") {
    const double t = 0.7;
    const Complex alpha(0.8, 0.0), beta(-0.3, 0.2);
    auto joint = beam_splitter(coherent_state(alpha, FockCutoff(24)),
                               coherent_state(beta, FockCutoff(24)), t);
    const Complex out_a = std::sqrt(t) * alpha + kI * std::sqrt(1 - t) * beta;
    const Complex out_b = kI * std::sqrt(1 - t) * alpha + std::sqrt(t) * beta;
    auto expect_a = coherent_state(out_a, FockCutoff(48));
    auto expect_b = coherent_state(out_b, FockCutoff(48));
    Matrix product =
        expect_a.amplitudes() * expect_b.amplitudes().transpose();
    CHECK((joint.amplitudes - product).norm() < 1e-9);
  }
  SUBCASE("unitarity on a generic product input") {
    auto joint = beam_splitter(squeezed_vacuum(0.6, FockCutoff(60)),
                               coherent_state(0.4, FockCutoff(16)), 0.83);
    CHECK(std::abs(joint.norm_sq() - 1.0) < 1e-10);
  }
  SUBCASE("photon-number blocks are preserved exactly") {
    auto joint = beam_splitter(fock_basis_state(3, FockCutoff(6)),
                               fock_basis_state(2, FockCutoff(4)), 0.3);
    for (int na = 0; na <= joint.cutoff_a.n_max; ++na)
      for (int nb = 0; nb <= joint.cutoff_b.n_max; ++nb)
        if (na + nb != 5)
          CHECK(std::abs(joint.amplitudes(na, nb)) < 1e-14);
  }
}

TEST_CASE("conditioning on detection") {
  DetectorModel nr1{DetectorKind::NumberResolvingOne};
  SUBCASE("no photons, no herald") {
    auto joint =
        beam_splitter(vacuum(FockCutoff(4)), vacuum(FockCutoff(4)), 0.5);
    auto res = condition_on_detection(joint, nr1);
    CHECK(res.probability == 0.0);
  }
  SUBCASE("|2,0> heralds with probability 2T(1-T) onto |1>") {
    const double t = 0.8;
    auto joint = beam_splitter(fock_basis_state(2, FockCutoff(4)),
                               vacuum(FockCutoff(4)), t);
    auto res = condition_on_detection(joint, nr1);
    CHECK(res.probability == doctest::Approx(2 * t * (1 - t)).epsilon(1e-12));
    auto out = std::get<PureState>(res.state).normalized();
    CHECK(std::abs(std::abs(out.amplitude(1)) - 1.0) < 1e-12);
  }
  SUBCASE("click branches plus the no-click branch are complete") {
    auto joint = beam_splitter(squeezed_vacuum(0.6, FockCutoff(60)),
                               vacuum(FockCutoff(16)), 0.85);
    DetectorModel apd{DetectorKind::ClickApd};
    auto clicked = condition_on_detection(joint, apd, Complex(0.1, 0.2));
    // No-click branch: weight of the zero-photon trigger column after the
    // same displacement.
    auto displaced = displace_mode_b(joint, Complex(0.1, 0.2));
    const double no_click = displaced.amplitudes.col(0).squaredNorm();
    CHECK(clicked.probability + no_click == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("fidelity") {
  auto s = squeezed_vacuum(0.5, FockCutoff(40));
  CHECK(fidelity(s, s) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(fidelity(fock_basis_state(0, FockCutoff(4)),
                 fock_basis_state(1, FockCutoff(4))) == 0.0);
  SUBCASE("zero-norm operand rejected") {
    PureState zero(FockCutoff(4), Vector::Zero(5));
    CHECK_THROWS_AS(fidelity(zero, s), ZeroNorm);
  }
  SUBCASE("mixed fidelity agrees with the pure definition on pure states") {
    auto cat = cat_state(1.5, Parity::Odd, FockCutoff(40));
    auto rho = DensityOperator::from_pure(s);
    CHECK(fidelity_mixed(rho, cat) ==
          doctest::Approx(fidelity(s, cat)).epsilon(1e-12));
  }
}

TEST_CASE("cutoff policy convergence") {
  // Doubling the cutoff moves overlaps by less than 1e-9 at the largest
  // parameters the sweeps touch.
  const double alpha = 5.0, r = 0.9;
  auto c1 = default_cutoff(alpha, r);
  auto c2 = FockCutoff(2 * c1.n_max);
  auto f_at = [&](FockCutoff c) {
    auto sub = annihilate(squeezed_vacuum(r, c));
    return fidelity(sub, cat_state(alpha, Parity::Odd, c));
  };
  CHECK(std::abs(f_at(c1) - f_at(c2)) < 1e-9);
}

TEST_CASE("density operator basics") {
  auto s = squeezed_vacuum(0.5, FockCutoff(40));
  auto rho = DensityOperator::from_pure(s);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((rho.matrix() - rho.matrix().adjoint()).norm() < 1e-12);
  SUBCASE("trace distance between orthogonal pure states is 1") {
    auto r0 = DensityOperator::from_pure(fock_basis_state(0, FockCutoff(4)));
    auto r1 = DensityOperator::from_pure(fock_basis_state(1, FockCutoff(4)));
    CHECK(trace_distance(r0, r1) == doctest::Approx(1.0).epsilon(1e-12));
  }
}
