#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "specflow/fredholm.hpp"

using namespace specflow;
using test::diag_element;
using test::mixed_algebra;
using test::unit_algebra;

namespace {

// e^{iD} built from two functional calculus calls; commutes with D exactly
AlgebraElement phase_unitary(const AlgebraElement& d) {
  const AlgebraElement c = func_calc(d, [](double t) { return std::cos(t); });
  const AlgebraElement s = func_calc(d, [](double t) { return std::sin(t); });
  return c + Complex(0.0, 1.0) * s;
}

AlgebraElement invertible_hermitian(const AlgebraPtr& alg, uint64_t seed, double floor = 1e-3) {
  for (;; ++seed) {
    const AlgebraElement d = gen_hermitian(alg, 1.0, seed);
    if (eig_hermitian(d).min_abs_eigenvalue() > floor) return d;
  }
}

}  // namespace

TEST_CASE("summability profile equality") {
  const AlgebraPtr alg = unit_algebra(2);
  ModuleSpec zero{alg, AlgebraElement::zeros(alg), 2.0, {}, 1e-10};
  const SummabilityProfile pz = summability_profile(zero);
  CHECK(pz.norm_unbounded == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(pz.residual <= 1e-12);

  ModuleSpec diag{alg, diag_element(alg, {3.0, -4.0}), 2.0, {}, 1e-10};
  const SummabilityProfile pd = summability_profile(diag);
  CHECK(pd.norm_unbounded == doctest::Approx(std::sqrt(0.1 + 1.0 / 17.0)).epsilon(1e-12));
  CHECK(pd.residual <= 1e-10);

  const AlgebraPtr malg = mixed_algebra();
  for (uint64_t seed = 0; seed < 20; ++seed) {
    ModuleSpec spec{malg, gen_hermitian(malg, 1.0, 100 + seed), 2.5, {}, 1e-10};
    const SummabilityProfile pr = summability_profile(spec);
    CHECK(pr.residual <= 1e-10);
    CHECK(pr.truncation_profile.size() == static_cast<size_t>(malg->num_blocks()));
    CHECK(pr.truncation_profile.back() == doctest::Approx(pr.norm_unbounded).epsilon(1e-12));
    // the truncation profile is nondecreasing
    for (size_t k = 1; k < pr.truncation_profile.size(); ++k)
      CHECK(pr.truncation_profile[k] >= pr.truncation_profile[k - 1] - 1e-14);
  }
}

TEST_CASE("corollary 0.4 checks") {
  const AlgebraPtr alg = unit_algebra(6);
  const AlgebraElement d0 = invertible_hermitian(alg, 7);
  const double kp = estimate_Kp(2.0, {4, 6}, 60, 2024).value;

  SUBCASE("identity unitary") {
    ModuleSpec spec{alg, d0, 2.0, {AlgebraElement::identity(alg)}, 1e-10};
    const auto reports = check_corollary04(spec, kp);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].comm_D <= 1e-12);
    CHECK(reports[0].comm_phi_p <= 1e-12);
    CHECK(reports[0].comm_sgn_p <= 1e-12);
    CHECK(reports[0].conj_residual <= 1e-9);
  }

  SUBCASE("commuting unitary") {
    ModuleSpec spec{alg, d0, 2.0, {phase_unitary(d0)}, 1e-10};
    const auto reports = check_corollary04(spec, kp);
    CHECK(reports[0].comm_phi_p <= 1e-10);
    CHECK(reports[0].comm_sgn_p <= 1e-10);
  }

  SUBCASE("random unitaries") {
    ModuleSpec spec{alg, d0, 2.0, {gen_unitary(alg, 8), gen_unitary(alg, 9)}, 1e-10};
    const auto reports = check_corollary04(spec, kp);
    for (const auto& r : reports) {
      CHECK(r.conj_residual <= 1e-9);
      CHECK(r.factor_residual <= 1e-9);
      CHECK(r.gap_bound_holds);
      CHECK(r.triangle_holds);
      CHECK(r.phi_comm_bound_holds);
    }
  }

  SUBCASE("kernel guard") {
    ModuleSpec spec{alg, AlgebraElement::zeros(alg), 2.0, {}, 1e-10};
    CHECK_THROWS_AS(check_corollary04(spec, kp), Error);
  }
}

TEST_CASE("sgn-phi gap bound at the spectral gap") {
  const AlgebraPtr alg = unit_algebra(5);
  const AlgebraElement d = invertible_hermitian(alg, 17, 0.05);
  const double delta = eig_hermitian(d).min_abs_eigenvalue();
  const AlgebraElement sgn = sgn_op(d, 1e-10);
  const AlgebraElement phi = phi_map(d);
  const AlgebraElement sum_inv =
      func_calc((sgn + phi).hermitian_part(), [](double t) { return 1.0 / t; });
  const double lhs = operator_norm(sgn - phi);
  const double rhs = operator_norm(sum_inv) / (1.0 + delta * delta);
  CHECK(lhs <= rhs + 1e-10);
}

TEST_CASE("mixed norm") {
  const AlgebraPtr alg = unit_algebra(2);
  Matrix f0m(2, 2);
  f0m << 1.0, 0.0, 0.0, -1.0;
  AlgebraElement f0(alg, {f0m});
  f0.certify_hermitian();

  CHECK(norm_p_phalf(AlgebraElement::zeros(alg), f0, 4.0) == 0.0);

  // X anticommuting with F0 reduces the mixed norm to ||X||_p
  Matrix xm(2, 2);
  xm << 0.0, 1.0, 1.0, 0.0;
  AlgebraElement x(alg, {xm});
  x.certify_hermitian();
  CHECK(norm_p_phalf(x, f0, 4.0) == doctest::Approx(schatten_norm(x, 4.0)).epsilon(1e-12));

  // dense re-evaluation oracle
  const AlgebraPtr malg = mixed_algebra();
  const AlgebraElement xr = gen_hermitian(malg, 1.0, 21);
  const AlgebraElement fr = gen_hermitian(malg, 1.0, 22);
  const double direct =
      schatten_norm(xr, 4.0) + schatten_norm(xr * fr + fr * xr, 2.0);
  CHECK(norm_p_phalf(xr, fr, 4.0) == doctest::Approx(direct).epsilon(1e-12));

  CHECK_THROWS_AS(norm_p_phalf(x, f0, 1.5, /*strict=*/true), Error);
  CHECK(norm_p_phalf(x, f0, 1.5, /*strict=*/false) > 0.0);
}

TEST_CASE("phi affine image") {
  const AlgebraPtr alg = unit_algebra(1);
  const double kp = 1.0;

  const PhiAffineImage zero = phi_affine_image(diag_element(alg, {0.5}),
                                               AlgebraElement::zeros(alg), 4.0, kp);
  CHECK(zero.x_norm_p_phalf <= 1e-12);
  CHECK(zero.identity_residual <= 1e-12);
  CHECK(zero.bound_holds);

  // scalar case: D0 = 0, A = 1 gives X_D = 1/sqrt(2)
  const PhiAffineImage scalar = phi_affine_image(AlgebraElement::zeros(alg),
                                                 diag_element(alg, {1.0}), 4.0, kp);
  CHECK(scalar.bound_lhs == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(scalar.identity_residual <= 1e-12);

  const AlgebraPtr malg = mixed_algebra();
  const double kp4 = estimate_Kp(4.0, {4, 8}, 60, 99).value;
  for (uint64_t seed = 0; seed < 15; ++seed) {
    const PhiAffineImage img = phi_affine_image(gen_hermitian(malg, 1.0, 200 + seed),
                                                gen_hermitian(malg, 1.0, 300 + seed), 4.0, kp4);
    CHECK(img.identity_residual <= 1e-9);
    CHECK(img.bound_holds);
    CHECK_FALSE(img.quasi_norm);
  }
}

TEST_CASE("chern character hand oracles") {
  const AlgebraPtr alg = unit_algebra(2);
  Matrix f0m(2, 2);
  f0m << 1.0, 0.0, 0.0, -1.0;
  AlgebraElement f0(alg, {f0m});
  f0.certify_hermitian();

  Matrix am(2, 2);
  am << 0.0, 1.0, 1.0, 0.0;
  AlgebraElement a(alg, {am});

  // tau(F [F,a][F,a]) = 0 for this pair
  CHECK(std::abs(chern_character(f0, {a, a})) <= 1e-13);

  // with a second off-diagonal argument the value is 8i
  Matrix bm(2, 2);
  bm << 0.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 0.0;
  AlgebraElement b(alg, {bm});
  const Complex v = chern_character(f0, {a, b});
  CHECK(v.real() == doctest::Approx(0.0).scale(1).epsilon(1e-13));
  CHECK(v.imag() == doctest::Approx(8.0).epsilon(1e-13));

  // any identity slot kills the character
  CHECK(std::abs(chern_character(f0, {AlgebraElement::identity(alg), a})) <= 1e-13);

  CHECK_THROWS_AS(chern_character(2.0 * f0, {a, a}), Error);
  CHECK_THROWS_AS(chern_character(f0, {a}), Error);
}

TEST_CASE("chern character multilinearity and cyclicity") {
  const AlgebraPtr alg = unit_algebra(4);
  const AlgebraElement f0 = sgn_op(invertible_hermitian(alg, 31), 1e-10);

  const AlgebraElement a = gen_gaussian(alg, 1.0, 32);
  const AlgebraElement b = gen_gaussian(alg, 1.0, 33);
  const AlgebraElement c = gen_gaussian(alg, 1.0, 34);
  const AlgebraElement d = gen_gaussian(alg, 1.0, 35);

  const Complex lin = chern_character(f0, {a + 2.0 * b, c}) - chern_character(f0, {a, c}) -
                      2.0 * chern_character(f0, {b, c});
  CHECK(std::abs(lin) <= 1e-10);

  // cyclic shift flips the sign in odd degree
  const Complex orig = chern_character(f0, {a, b, c, d});
  const Complex cycled = chern_character(f0, {b, c, d, a});
  CHECK(std::abs(cycled + orig) <= 1e-9);
}
