#include <doctest.h>

#include "helpers.hpp"

using namespace specflow;
using test::diag_element;
using test::mixed_algebra;
using test::unit_algebra;

TEST_CASE("block algebra bookkeeping") {
  const AlgebraPtr alg = make_algebra({{2, 1.0}, {1, 0.5}});
  CHECK(alg->num_blocks() == 2);
  CHECK(alg->total_dim() == 3);
  CHECK(alg->total_trace() == doctest::Approx(2.5).epsilon(1e-15));

  CHECK_THROWS_AS(make_algebra({}), Error);
  CHECK_THROWS_AS(make_algebra({{0, 1.0}}), Error);
  CHECK_THROWS_AS(make_algebra({{2, -1.0}}), Error);
  CHECK_THROWS_AS(make_algebra({{2, 0.0}}), Error);
}

TEST_CASE("element shape checks") {
  const AlgebraPtr alg = make_algebra({{2, 1.0}, {1, 0.5}});
  CHECK_THROWS_AS(AlgebraElement(alg, {Matrix::Zero(2, 2)}), Error);
  CHECK_THROWS_AS(AlgebraElement(alg, {Matrix::Zero(2, 2), Matrix::Zero(2, 2)}), Error);

  const AlgebraElement one = AlgebraElement::identity(alg);
  CHECK(one.hermitian());
  CHECK(trace(one).real() == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("hermitian certification") {
  const AlgebraPtr alg = unit_algebra(2);
  Matrix m(2, 2);
  m << Complex(1, 0), Complex(0, 1), Complex(0, -1), Complex(2, 0);
  AlgebraElement x(alg, {m});
  CHECK_FALSE(x.hermitian());
  x.certify_hermitian();
  CHECK(x.hermitian());

  Matrix bad(2, 2);
  bad << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(2, 0);
  AlgebraElement y(alg, {bad});
  CHECK_THROWS_AS(y.certify_hermitian(), Error);

  // a defect below 1e-12 * scale symmetrizes silently
  Matrix close = m;
  close(0, 1) += Complex(1e-14, 0);
  AlgebraElement z(alg, {close});
  z.certify_hermitian();
  CHECK(z.hermitian());
  CHECK((z.block(0) - z.block(0).adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross-algebra operations are rejected") {
  const AlgebraElement a = AlgebraElement::identity(unit_algebra(2));
  const AlgebraElement b = AlgebraElement::identity(unit_algebra(3));
  CHECK_THROWS_AS(a * b, Error);
  CHECK_THROWS_AS(a + b, Error);
  CHECK_THROWS_AS(trace_product(a, b), Error);
}

TEST_CASE("hermitian flag propagation") {
  const AlgebraPtr alg = mixed_algebra();
  const AlgebraElement x = gen_hermitian(alg, 1.0, 7);
  const AlgebraElement y = gen_hermitian(alg, 1.0, 8);
  CHECK((x + y).hermitian());
  CHECK((x - y).hermitian());
  CHECK((x * 2.0).hermitian());
  CHECK_FALSE((x * Complex(0, 1)).hermitian());
  CHECK_FALSE((x * y).hermitian());  // products are not Hermitian in general
  CHECK(x.adjoint().hermitian());
}

TEST_CASE("commutator helpers") {
  const AlgebraPtr alg = unit_algebra(3);
  const AlgebraElement x = gen_hermitian(alg, 1.0, 1);
  const AlgebraElement one = AlgebraElement::identity(alg);
  CHECK(commutator(x, one).max_abs() == doctest::Approx(0.0).epsilon(0).scale(1));
  const AlgebraElement anti = anticommutator(x, one) - 2.0 * x;
  CHECK(anti.max_abs() <= 1e-15);
}
