#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "specflow/inequalities.hpp"

using namespace specflow;
using test::diag_element;
using test::mixed_algebra;
using test::unit_algebra;

namespace {

double shared_kp(double p) {
  // one modest estimate per exponent is plenty for unit scale checks
  static std::map<double, double> cache;
  auto it = cache.find(p);
  if (it == cache.end()) it = cache.emplace(p, estimate_Kp(p, {4, 8}, 60, 2024).value).first;
  return it->second;
}

}  // namespace

TEST_CASE("transfer constant") {
  CHECK(transfer_constant(0.0, 1.0, TransferDirection::ToPhi) ==
        doctest::Approx(std::pow(2.0, 1.5) + 1.0).epsilon(1e-12));
  CHECK(transfer_constant(3.0, 0.0, TransferDirection::FromPhi) == doctest::Approx(3.0));
  const double roundtrip =
      transfer_constant(transfer_constant(1.0, 2.0, TransferDirection::ToPhi), 2.0,
                        TransferDirection::FromPhi);
  CHECK(roundtrip == doctest::Approx(1.0 + 2.0 * (std::pow(2.0, 1.5) + 1.0) * 2.0).epsilon(1e-12));
  CHECK_THROWS_AS(transfer_constant(-1.0, 1.0, TransferDirection::ToPhi), Error);
}

TEST_CASE("theorem 0.3(i): zero perturbation") {
  const AlgebraPtr alg = unit_algebra(4);
  const AlgebraElement x = gen_hermitian(alg, 1.0, 1);
  const auto [r1, r2] = verify_thm03i(x, AlgebraElement::zeros(alg), 2.0, shared_kp(2.0));
  CHECK(r1.pass);
  CHECK(r2.pass);
  CHECK(r1.lhs <= 1e-12);
  CHECK(r2.lhs <= 1e-12);
}

TEST_CASE("theorem 0.3(i): commuting diagonal case") {
  const AlgebraPtr alg = unit_algebra(3);
  const AlgebraElement x = diag_element(alg, {2.0, -1.0, 0.3});
  const AlgebraElement a = diag_element(alg, {0.5, 0.4, -0.2});
  const auto [r1, r2] = verify_thm03i(x, a, 2.0, shared_kp(2.0));
  CHECK(r1.pass);
  CHECK(r2.pass);
  // scalar double-check: |(|x| - |x-a|) z| <= |a| z entrywise, and Z_p >= 1
  CHECK(r1.lhs <= operator_norm(a) * schatten_norm(resolvent_half(x), 2.0) + 1e-12);
}

TEST_CASE("theorem 0.3(i): random instances and homogeneity probe") {
  for (double p : {1.5, 2.0, 4.0}) {
    const double kp = shared_kp(p);
    for (const AlgebraPtr& alg : {unit_algebra(4), test::mixed_algebra8()}) {
      for (uint64_t seed = 0; seed < 15; ++seed) {
        const AlgebraElement x = gen_hermitian(alg, 1.0, 3000 + seed);
        Rng rng(4000 + seed);
        const AlgebraElement a =
            gen_hermitian(alg, std::exp(rng.uniform(std::log(0.05), std::log(5.0))), 5000 + seed);
        const auto [r1, r2] = verify_thm03i(x, a, p, kp);
        CHECK(r1.pass);
        CHECK(r2.pass);
      }
    }
  }
  // shrinking a keeps both reports passing across the modulus crossover
  const AlgebraPtr alg = unit_algebra(6);
  const AlgebraElement x = gen_hermitian(alg, 1.0, 6000);
  const AlgebraElement a = gen_hermitian(alg, 2.0, 6001);
  for (double t : {1.0, 0.3, 0.04}) {
    const auto [r1, r2] = verify_thm03i(x, t * a, 2.0, shared_kp(2.0));
    CHECK(r1.pass);
    CHECK(r2.pass);
  }
  CHECK_THROWS_AS(verify_thm03i(x, a, 1.0, 1.0), Error);
}

TEST_CASE("theorem 0.3(ii)") {
  const AlgebraPtr alg = unit_algebra(5);
  const AlgebraElement x = gen_hermitian(alg, 1.0, 7);
  const AlgebraElement a = gen_hermitian(alg, 1.0, 8);
  const AlgebraElement one = AlgebraElement::identity(alg);

  const InequalityReport zero = verify_thm03ii(x, AlgebraElement::zeros(alg), one, 2.0, shared_kp(2.0));
  CHECK(zero.pass);
  CHECK(zero.lhs <= 1e-12);

  // z = 1 reduces to the plain absolute-value difference bound
  const InequalityReport flat = verify_thm03ii(x, a, one, 2.0, shared_kp(2.0));
  CHECK(flat.pass);
  CHECK(flat.rhs == doctest::Approx(kcal_p(shared_kp(2.0)) * operator_norm(a) *
                                    std::sqrt(alg->total_trace()))
                        .epsilon(1e-10));

  for (uint64_t seed = 0; seed < 30; ++seed) {
    const AlgebraElement xs = gen_hermitian(alg, 1.0, 900 + seed);
    const AlgebraElement as = gen_hermitian(alg, 1.0, 1000 + seed);
    const AlgebraElement z = func_calc(xs, [](double t) { return std::exp(-0.5 * t * t); });
    CHECK(verify_thm03ii(xs, as, z, 3.0, shared_kp(3.0)).pass);
  }

  // support and commutation preconditions
  const AlgebraElement singular = diag_element(alg, {1.0, 1.0, 1.0, 1.0, 0.0});
  CHECK_THROWS_AS(verify_thm03ii(x, a, singular, 2.0, 1.0), Error);
  const AlgebraElement noncommuting = gen_psd(alg, 1.0, 11) + 0.1 * one;
  CHECK_THROWS_AS(verify_thm03ii(x, a, noncommuting, 2.0, 1.0), Error);
}

TEST_CASE("estimate (2.5): scalar oracle and p=1") {
  const AlgebraPtr alg = unit_algebra(1);
  const AlgebraElement x = AlgebraElement::zeros(alg);
  const AlgebraElement a = diag_element(alg, {1.0});
  const InequalityReport r = verify_25(x, a, 1.0);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(r.rhs == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-12));

  const InequalityReport zero = verify_25(gen_hermitian(unit_algebra(4), 1.0, 1),
                                          AlgebraElement::zeros(unit_algebra(4)), 2.0);
  CHECK(zero.lhs <= 1e-12);

  for (double p : {1.0, 2.0, 3.0}) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
      const AlgebraPtr malg = mixed_algebra();
      const AlgebraElement xs = gen_hermitian(malg, 1.0, 1100 + seed);
      const AlgebraElement as = gen_hermitian(malg, 1.5, 1200 + seed);
      const InequalityReport rs = verify_25(xs, as, p);
      CHECK(rs.pass);
      // re-centering at y with the reversed perturbation also passes
      const AlgebraElement y = (xs - as).hermitian_part();
      CHECK(verify_25(y, -1.0 * as, p).pass);
    }
  }
}

TEST_CASE("lemma A.1") {
  const AlgebraPtr alg = mixed_algebra();
  const AlgebraElement psd = gen_psd(alg, 1.0, 31);
  const auto [same, same_cor] = verify_lemmaA1(psd, psd);
  CHECK(same.pass);
  CHECK(same_cor.pass);

  const auto [zero, zero_cor] = verify_lemmaA1(AlgebraElement::zeros(alg), psd);
  CHECK(zero.pass);
  CHECK(zero_cor.pass);

  for (uint64_t seed = 0; seed < 25; ++seed) {
    const AlgebraElement g = abs_op(gen_gaussian(alg, 1.0, 1300 + seed));
    const AlgebraElement h = abs_op(gen_gaussian(alg, 1.0, 1400 + seed));
    const auto [pointwise, corollary] = verify_lemmaA1((g - h).hermitian_part(),
                                                       (g + h).hermitian_part());
    CHECK(pointwise.pass);
    CHECK(corollary.pass);
  }

  // order violation: x not dominated by y
  const AlgebraElement big = diag_element(unit_algebra(1), {2.0});
  const AlgebraElement small = diag_element(unit_algebra(1), {1.0});
  CHECK_THROWS_AS(verify_lemmaA1(big, small), Error);
}

TEST_CASE("corollary A.1 function family") {
  const AlgebraPtr alg = unit_algebra(4);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const AlgebraElement g = abs_op(gen_gaussian(alg, 1.0, 1500 + seed));
    const AlgebraElement h = abs_op(gen_gaussian(alg, 1.0, 1600 + seed));
    const AlgebraElement x = (g - h).hermitian_part();
    const AlgebraElement y = (g + h).hermitian_part();
    CHECK(verify_corA1(x, y, [](double t) { return std::sqrt(t); }, "sqrt").pass);
    CHECK(verify_corA1(x, y, [](double t) { return t; }, "id").pass);
    CHECK(verify_corA1(x, y, [](double t) { return t * t; }, "square").pass);
    CHECK(verify_corA1(x, y, [](double t) { return std::log1p(t); }, "log1p").pass);
  }
}

TEST_CASE("estimate (A.2) with the sandwich") {
  const AlgebraPtr alg = unit_algebra(1);
  const InequalityReport scalar = verify_A2(AlgebraElement::zeros(alg), diag_element(alg, {1.0}), 2.0);
  CHECK(scalar.pass);

  const AlgebraPtr malg = mixed_algebra();
  const InequalityReport zero = verify_A2(gen_hermitian(malg, 1.0, 41), AlgebraElement::zeros(malg), 2.0);
  CHECK(zero.pass);
  CHECK(zero.lhs <= 1e-10);

  for (double p : {1.0, 2.0, 3.0}) {
    for (uint64_t seed = 0; seed < 15; ++seed) {
      const AlgebraElement x = gen_hermitian(malg, 1.0, 1700 + seed);
      const AlgebraElement a = gen_hermitian(malg, 1.2, 1800 + seed);
      CHECK(verify_A2(x, a, p).pass);
    }
  }
}

TEST_CASE("bks inequality") {
  const AlgebraPtr alg = unit_algebra(1);
  const AlgebraElement a4 = diag_element(alg, {4.0});
  const AlgebraElement b1 = diag_element(alg, {1.0});
  const InequalityReport r = verify_bks(a4, b1);
  CHECK(r.pass);
  // lhs is the negative margin: sqrt(3) - 1 at the only breakpoint
  CHECK(-r.lhs == doctest::Approx(std::sqrt(3.0) - 1.0).epsilon(1e-12));

  const AlgebraPtr malg = mixed_algebra();
  const AlgebraElement a = gen_psd(malg, 1.0, 51);
  const InequalityReport rb0 = verify_bks(a, AlgebraElement::zeros(malg));
  CHECK(rb0.pass);
  CHECK(std::abs(rb0.lhs) <= 1e-9);

  for (uint64_t seed = 0; seed < 25; ++seed) {
    const AlgebraElement x = gen_psd(malg, 1.0, 1900 + seed);
    const AlgebraElement y = gen_psd(malg, 1.0, 2000 + seed);
    const InequalityReport rr = verify_bks(x, y);
    CHECK(rr.pass);
    // margin is scale covariant: (t^2 a, t^2 b) scales mu by t
    const InequalityReport scaled = verify_bks(4.0 * x, 4.0 * y);
    CHECK(scaled.lhs == doctest::Approx(2.0 * rr.lhs).epsilon(1e-9).scale(1.0));
  }

  CHECK_THROWS_AS(verify_bks(gen_hermitian(malg, 1.0, 60), a), Error);
}

TEST_CASE("report digests replay") {
  const AlgebraPtr alg = unit_algebra(3);
  const AlgebraElement x = gen_hermitian(alg, 1.0, 70);
  const AlgebraElement a = gen_hermitian(alg, 1.0, 71);
  const auto [r1, r2] = verify_thm03i(x, a, 2.0, 1.0);
  const auto [s1, s2] = verify_thm03i(x, a, 2.0, 1.0);
  CHECK(r1.instance_digest == s1.instance_digest);
  CHECK(r1.lhs == s1.lhs);
  CHECK(r2.rhs == s2.rhs);
  const auto [t1, t2] = verify_thm03i(x, gen_hermitian(alg, 1.0, 72), 2.0, 1.0);
  CHECK(t1.instance_digest != r1.instance_digest);
}
