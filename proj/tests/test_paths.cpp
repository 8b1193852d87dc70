#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "specflow/paths.hpp"

using namespace specflow;
using test::diag_element;
using test::mixed_algebra;
using test::unit_algebra;

namespace {

// g_2 is the closed-form antiderivative of (1+u^2)^{-2}
double g2(double u) { return u / (2.0 * (1.0 + u * u)) + 0.5 * std::atan(u); }

OperatorPath truncated_shift(int k_max, int grid = 65) {
  const int n = 2 * k_max + 1;
  const AlgebraPtr alg = make_algebra({{n, 1.0}});
  Matrix d0 = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) d0(i, i) = static_cast<double>(i - k_max) - 0.5;
  AlgebraElement D0(alg, {d0});
  D0.certify_hermitian();
  return OperatorPath::linear(D0, AlgebraElement::identity(alg), grid);
}

OperatorPath random_linear(int dim, uint64_t seed, int grid = 33) {
  const AlgebraPtr alg = make_algebra({{dim, 1.0}});
  return OperatorPath::linear(gen_hermitian(alg, 1.0, seed), gen_hermitian(alg, 1.0, seed + 1),
                              grid);
}

}  // namespace

TEST_CASE("normalization constants against their defining integrals") {
  // C~_m = integral over R of (1+u^2)^{-m}; substitute u = tan(theta) to get
  // a finite-range oracle integral of cos^{2m-2}
  QuadratureSpec spec;
  spec.tol = 1e-12;
  spec.max_panels = 1 << 18;
  for (double m : {1.0, 1.5, 2.0, 2.5, 3.5}) {
    if (!(m > 0.5)) continue;
    const QuadResult oracle = adaptive_simpson(
        [m](double th) { return std::pow(std::cos(th), 2.0 * m - 2.0); }, -M_PI / 2.0, M_PI / 2.0,
        spec);
    REQUIRE(oracle.converged);
    CHECK(ctilde_constant(m) == doctest::Approx(oracle.value).epsilon(1e-10));
  }
  CHECK(ctilde_constant(2.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));

  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const QuadResult oracle = adaptive_simpson(
        [a](double u) { return std::pow(std::max(0.0, 1.0 - u * u), a); }, -1.0, 1.0, spec);
    REQUIRE(oracle.converged);
    CHECK(cweight_constant(a) == doctest::Approx(oracle.value).epsilon(1e-9));
  }
  CHECK(cweight_constant(1.0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("adaptive simpson basics") {
  QuadratureSpec spec;
  const QuadResult poly = adaptive_simpson([](double t) { return t * t * t; }, 0.0, 1.0, spec);
  CHECK(poly.converged);
  CHECK(poly.value == doctest::Approx(0.25).epsilon(1e-12));

  QuadratureSpec tight;
  tight.tol = 1e-14;
  tight.max_panels = 8;  // forced failure
  const QuadResult fail =
      adaptive_simpson([](double t) { return std::sqrt(std::abs(t - 0.3337)); }, 0.0, 1.0, tight);
  CHECK_FALSE(fail.converged);
}

TEST_CASE("crossing count: scalar path") {
  const AlgebraPtr alg = make_algebra({{1, 1.0}});
  const OperatorPath path = OperatorPath::linear(diag_element(alg, {-1.0}),
                                                 2.0 * AlgebraElement::identity(alg));
  CHECK(crossing_sf(path, 1e-10) == doctest::Approx(1.0));

  // the crossing sits exactly on a grid sample, so the audit warns that
  // the default grid cannot resolve it
  std::vector<std::string> warnings;
  crossing_sf(path, 1e-10, &warnings);
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("crossing count: conjugation path is flat") {
  const AlgebraPtr alg = unit_algebra(4);
  AlgebraElement d0 = gen_hermitian(alg, 1.0, 3);
  for (uint64_t seed = 4; eig_hermitian(d0).min_abs_eigenvalue() <= 1e-3; ++seed)
    d0 = gen_hermitian(alg, 1.0, seed);
  const OperatorPath path = OperatorPath::conjugation(d0, gen_hermitian(alg, 1.0, 5));
  CHECK(crossing_sf(path, 1e-10) == doctest::Approx(0.0).scale(1).epsilon(0));
}

TEST_CASE("crossing count: weighted blocks") {
  const AlgebraPtr alg = make_algebra({{1, 1.0}, {1, 2.0}});
  const AlgebraElement d0 = diag_element(alg, {1.0, -1.0});
  const AlgebraElement a = diag_element(alg, {-2.0, 2.0});
  const OperatorPath path = OperatorPath::linear(d0, a);
  // tau E_neg(start) = 2, tau E_neg(end) = 1
  CHECK(crossing_sf(path, 1e-10) == doctest::Approx(1.0));

  // an endpoint kernel is rejected outright
  CHECK_THROWS_AS(crossing_sf(OperatorPath::linear(d0, -1.0 * d0), 1e-10), Error);
}

TEST_CASE("unbounded integral formula: conjugation path vanishes") {
  const AlgebraPtr alg = unit_algebra(4);
  const OperatorPath path =
      OperatorPath::conjugation(gen_hermitian(alg, 1.0, 7), gen_hermitian(alg, 1.0, 8));
  const SpectralFlowResult res = integral_sf_unbounded(path, 2.0);
  CHECK(std::abs(res.integral_sf) <= 1e-8);
}

TEST_CASE("unbounded integral formula: scalar path closed form") {
  const AlgebraPtr alg = make_algebra({{1, 1.0}});
  const OperatorPath path = OperatorPath::linear(diag_element(alg, {-1.0}),
                                                 2.0 * AlgebraElement::identity(alg));
  const SpectralFlowResult res = integral_sf_unbounded(path, 2.0);
  // closed form: (1/C~_2)(g_2(1) - g_2(-1)); not 1, the endpoints are not
  // unitarily equivalent
  const double expected = (g2(1.0) - g2(-1.0)) / (M_PI / 2.0);
  CHECK(res.integral_sf == doctest::Approx(expected).epsilon(1e-8));
  CHECK(res.crossing_sf == doctest::Approx(1.0));
  CHECK(std::abs(res.integral_sf - (1.0 / M_PI + 0.5)) <= 1e-8);
}

TEST_CASE("unbounded integral formula: truncated shift") {
  const OperatorPath path = truncated_shift(20);
  const SpectralFlowResult res = integral_sf_unbounded(path, 2.0);
  CHECK(res.crossing_sf == doctest::Approx(1.0));
  // telescoping closed form for the whole family
  const double expected = (g2(20.5) - g2(-20.5)) / (M_PI / 2.0);
  CHECK(res.integral_sf == doctest::Approx(expected).epsilon(1e-7));
  CHECK(std::abs(res.integral_sf - 1.0) <= 1e-4);
  CHECK(crossing_sf(path, 1e-10) == doctest::Approx(1.0));
}

TEST_CASE("bounded integral formula") {
  const AlgebraPtr alg = unit_algebra(4);
  const OperatorPath conj =
      OperatorPath::conjugation(gen_hermitian(alg, 1.0, 9), gen_hermitian(alg, 1.0, 10));
  CHECK(std::abs(integral_sf_bounded(conj, 3.0).integral_sf) <= 1e-8);

  const OperatorPath shift = truncated_shift(20);
  const SpectralFlowResult res = integral_sf_bounded(shift, 3.0);
  CHECK(std::abs(res.integral_sf - 1.0) <= 2e-4);
  CHECK(res.consistency_delta <= 1e-6);
}

TEST_CASE("bounded and unbounded formulas agree") {
  for (double q : {3.0, 4.0, 5.0}) {
    for (uint64_t seed = 0; seed < 5; ++seed) {
      const OperatorPath path = random_linear(6, 100 + 10 * seed);
      const SpectralFlowResult bounded = integral_sf_bounded(path, q);
      const SpectralFlowResult unbounded = integral_sf_unbounded(path, 0.5 * q + 1.0);
      CHECK(std::abs(bounded.integral_sf - unbounded.integral_sf) <= 1e-6);
      CHECK(bounded.consistency_delta <= 1e-6);
    }
  }
}

TEST_CASE("differentiation formula") {
  const AlgebraPtr alg = unit_algebra(4);
  const OperatorPath conj =
      OperatorPath::conjugation(gen_hermitian(alg, 1.0, 11), gen_hermitian(alg, 1.0, 12));
  CHECK(verify_diff_formula(conj, 1.0, 0.5, 1e-3) <= 1e-9);

  // scalar path d_t = t: both sides equal (1+t^2)^{-n-3/2}
  const AlgebraPtr s = make_algebra({{1, 1.0}});
  const OperatorPath scalar =
      OperatorPath::linear(AlgebraElement::zeros(s), AlgebraElement::identity(s));
  CHECK(verify_diff_formula(scalar, 1.0, 0.4, 1e-4) <= 1e-7);

  for (uint64_t seed = 0; seed < 10; ++seed) {
    const OperatorPath path = random_linear(6, 200 + 2 * seed);
    CHECK(verify_diff_formula(path, 1.0, 0.37, 1e-4) <= 1e-6);
    // halving h quarters the residual
    const double r1 = verify_diff_formula(path, 1.0, 0.37, 0.02);
    const double r2 = verify_diff_formula(path, 1.0, 0.37, 0.01);
    if (r1 > 1e-10) {
      CHECK(r1 / r2 > 3.5);
      CHECK(r1 / r2 < 4.5);
    }
  }
  CHECK_THROWS_AS(verify_diff_formula(scalar, 1.0, 0.5, 1e-9), Error);
  CHECK_THROWS_AS(verify_diff_formula(scalar, 1.0, 0.0, 1e-4), Error);
}

TEST_CASE("eta potential") {
  const AlgebraPtr alg = unit_algebra(1);
  CHECK(eta_potential(AlgebraElement::zeros(alg), 2.0) == 0.0);
  CHECK(eta_potential(diag_element(alg, {1.0}), 2.0) ==
        doctest::Approx(0.25 + M_PI / 8.0).epsilon(1e-12));
  // generic exponent goes through scalar quadrature
  CHECK(eta_potential(diag_element(alg, {1.0}), 2.7) > 0.0);
  CHECK_THROWS_AS(eta_potential(diag_element(alg, {1.0}), 0.4), Error);

  // one-form exactness: the un-normalized integral telescopes through eta
  for (uint64_t seed = 0; seed < 8; ++seed) {
    const OperatorPath path = random_linear(8, 300 + 2 * seed);
    const SpectralFlowResult res = integral_sf_unbounded(path, 2.0);
    const double eta_diff = eta_potential(path.at(1.0), 2.0) - eta_potential(path.at(0.0), 2.0);
    CHECK(std::abs(res.numerator - eta_diff) <= 1e-7);
  }
}

TEST_CASE("one forms") {
  const AlgebraPtr alg = unit_algebra(1);
  CHECK(alpha_form(diag_element(alg, {0.7}), AlgebraElement::zeros(alg), 2.0) == 0.0);
  CHECK(alpha_form(AlgebraElement::zeros(alg), AlgebraElement::identity(alg), 2.0) ==
        doctest::Approx(2.0 / M_PI).epsilon(1e-13));

  const AlgebraPtr malg = mixed_algebra();
  const AlgebraElement d = gen_hermitian(malg, 1.0, 61);
  const AlgebraElement a = gen_hermitian(malg, 1.0, 62);
  const AlgebraElement b = gen_hermitian(malg, 1.0, 63);
  const double lin = alpha_form(d, (a + 2.0 * b).hermitian_part(), 2.0) - alpha_form(d, a, 2.0) -
                     2.0 * alpha_form(d, b, 2.0);
  CHECK(std::abs(lin) <= 1e-10);

  const AlgebraElement f0 = phi_map(d);
  const double tlin = theta_form(f0, (a + 2.0 * b).hermitian_part(), 3.0) -
                      theta_form(f0, a, 3.0) - 2.0 * theta_form(f0, b, 3.0);
  CHECK(std::abs(tlin) <= 1e-10);
}

TEST_CASE("path reversal flips the flow") {
  const OperatorPath path = truncated_shift(6);
  const OperatorPath rev = path.reversed();
  CHECK(crossing_sf(rev, 1e-10) == doctest::Approx(-crossing_sf(path, 1e-10)));
  const double fwd = integral_sf_unbounded(path, 2.0).integral_sf;
  const double bwd = integral_sf_unbounded(rev, 2.0).integral_sf;
  CHECK(fwd == doctest::Approx(-bwd).epsilon(1e-7));

  const AlgebraPtr alg = unit_algebra(4);
  const OperatorPath conj =
      OperatorPath::conjugation(gen_hermitian(alg, 1.0, 71), gen_hermitian(alg, 1.0, 72));
  const OperatorPath conj_rev = conj.reversed();
  CHECK(operator_norm(conj_rev.at(0.3) - conj.at(0.7)) <= 1e-10);
}

TEST_CASE("concatenation additivity") {
  // split a linear path at t = 1/2; both methods add across the junction
  const AlgebraPtr alg = unit_algebra(5);
  AlgebraElement d0 = gen_hermitian(alg, 1.0, 81);
  AlgebraElement a = gen_hermitian(alg, 1.0, 82);
  const AlgebraElement mid = (d0 + 0.5 * a).hermitian_part();
  const OperatorPath whole = OperatorPath::linear(d0, a);
  const OperatorPath first = OperatorPath::linear(d0, 0.5 * a);
  const OperatorPath second = OperatorPath::linear(mid, 0.5 * a);

  if (eig_hermitian(whole.at(0.0)).min_abs_eigenvalue() > 1e-8 &&
      eig_hermitian(whole.at(1.0)).min_abs_eigenvalue() > 1e-8 &&
      eig_hermitian(mid).min_abs_eigenvalue() > 1e-8) {
    CHECK(crossing_sf(whole, 1e-10) ==
          doctest::Approx(crossing_sf(first, 1e-10) + crossing_sf(second, 1e-10)));
  }
  const double sum = integral_sf_unbounded(first, 2.0).integral_sf +
                     integral_sf_unbounded(second, 2.0).integral_sf;
  CHECK(integral_sf_unbounded(whole, 2.0).integral_sf == doctest::Approx(sum).epsilon(1e-7));
}

TEST_CASE("global conjugation invariance") {
  const AlgebraPtr alg = unit_algebra(4);
  const AlgebraElement u = gen_unitary(alg, 91);
  const OperatorPath path = random_linear(4, 92);
  const AlgebraElement d0c = (u.adjoint() * path.d0() * u).hermitian_part();
  const AlgebraElement ac = (u.adjoint() * path.generator() * u).hermitian_part();
  const OperatorPath conj_path = OperatorPath::linear(d0c, ac);

  if (eig_hermitian(path.at(0.0)).min_abs_eigenvalue() > 1e-8 &&
      eig_hermitian(path.at(1.0)).min_abs_eigenvalue() > 1e-8) {
    CHECK(crossing_sf(path, 1e-12) == doctest::Approx(crossing_sf(conj_path, 1e-12)));
  }
  CHECK(integral_sf_unbounded(path, 2.0).integral_sf ==
        doctest::Approx(integral_sf_unbounded(conj_path, 2.0).integral_sf).epsilon(1e-9).scale(1.0));
}

TEST_CASE("sampled paths") {
  const AlgebraPtr alg = unit_algebra(3);
  const OperatorPath source = random_linear(3, 95, 33);
  std::vector<double> grid;
  std::vector<AlgebraElement> samples;
  for (int i = 0; i <= 32; ++i) {
    grid.push_back(static_cast<double>(i) / 32.0);
    samples.push_back(source.at(grid.back()));
  }
  grid.back() = 1.0;
  const OperatorPath resampled = OperatorPath::sampled(grid, samples);
  CHECK(operator_norm(resampled.at(0.37) - source.at(0.37)) <= 1e-3);
  CHECK(operator_norm(resampled.tangent(0.5) - source.tangent(0.5)) <= 1e-3);
  CHECK(crossing_sf(resampled, 1e-10) == doctest::Approx(crossing_sf(source, 1e-10)));

  CHECK_THROWS_AS(OperatorPath::sampled({0.0, 0.5}, {samples[0], samples[1]}), Error);
  CHECK_THROWS_AS(OperatorPath::sampled({0.0, 0.5, 0.25, 1.0},
                                        {samples[0], samples[1], samples[2], samples[3]}),
                  Error);
}
