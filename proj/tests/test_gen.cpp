#include <doctest.h>

#include "helpers.hpp"

using namespace specflow;
using test::mixed_algebra;
using test::unit_algebra;

TEST_CASE("generators are deterministic in the seed") {
  const AlgebraPtr alg = mixed_algebra();
  const AlgebraElement a = gen_hermitian(alg, 1.0, 12345);
  const AlgebraElement b = gen_hermitian(alg, 1.0, 12345);
  for (int k = 0; k < alg->num_blocks(); ++k) CHECK(a.block(k) == b.block(k));

  const AlgebraElement u1 = gen_unitary(alg, 5);
  const AlgebraElement u2 = gen_unitary(alg, 5);
  for (int k = 0; k < alg->num_blocks(); ++k) CHECK(u1.block(k) == u2.block(k));

  const AlgebraElement p1 = gen_psd(alg, 1.0, 6);
  const AlgebraElement p2 = gen_psd(alg, 1.0, 6);
  for (int k = 0; k < alg->num_blocks(); ++k) CHECK(p1.block(k) == p2.block(k));

  const AlgebraElement c = gen_hermitian(alg, 1.0, 12346);
  CHECK((a - c).max_abs() > 0.0);
}

TEST_CASE("hermitian ensemble sanity") {
  CHECK_THROWS_AS(gen_hermitian(unit_algebra(4), 0.0, 1), Error);
  const AlgebraElement x = gen_hermitian(unit_algebra(8), 1.0, 2);
  CHECK(x.hermitian());
  CHECK(std::isfinite(operator_norm(x)));
}

TEST_CASE("semicircle radius concentrates near two scale") {
  const AlgebraElement x = gen_hermitian(unit_algebra(64), 1.0, 99);
  const double radius = operator_norm(x);
  CHECK(radius > 1.6);
  CHECK(radius < 2.4);

  const AlgebraElement y = gen_hermitian(unit_algebra(64), 0.5, 100);
  const double radius_half = operator_norm(y);
  CHECK(radius_half > 0.8);
  CHECK(radius_half < 1.2);
}

TEST_CASE("unitary and psd draws") {
  const AlgebraPtr alg = mixed_algebra();
  const AlgebraElement u = gen_unitary(alg, 8);
  const AlgebraElement one = AlgebraElement::identity(alg);
  CHECK(operator_norm(u.adjoint() * u - one) <= 1e-10);

  const AlgebraElement p = gen_psd(alg, 1.0, 9);
  CHECK(p.hermitian());
  CHECK(eig_hermitian(p).min_eigenvalue() >= -1e-12);
}
