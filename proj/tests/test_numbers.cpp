#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsd/numbers.hpp"
#include "tsd/poly.hpp"
#include "tsd/util.hpp"

using namespace tsd;

static ZPoly zp(std::initializer_list<long> v) {
  ZPoly p;
  for (long x : v) p.c.push_back(mpz_class(x));
  p.normalize();
  return p;
}

TEST_CASE("embedding order is ascending on the real line") {
  mpq_class w(1, 1 << 24);
  auto boxes = conjugate_boxes(zp({-2, 0, 1}), w);
  REQUIRE(boxes.size() == 2);
  CHECK(boxes[0].re.certainly_lt(boxes[1].re));
  CHECK(boxes[0].re.contains(mpq_class(0)) == false);
  // the cubic with roots near -1/4, 1/4 and 16 keeps that order
  auto cubic = conjugate_boxes(zp({1, 0, -16, 1}), w);
  REQUIRE(cubic.size() == 3);
  CHECK(cubic[0].re.certainly_lt(cubic[1].re));
  CHECK(cubic[1].re.certainly_lt(cubic[2].re));
  CHECK(cubic[2].re.contains(mpq_class(16)) == false);
}

TEST_CASE("minimal polynomial vanishes on every refined box") {
  Rng rng(41);
  for (const auto& coeffs : {zp({-2, 0, 1}), zp({-2, 0, 0, 1}), zp({1, 0, -16, 1}),
                             zp({1, 1, 1, 1, 1})}) {
    for (int k = 0; k < coeffs.degree(); ++k) {
      AlgebraicNumber a = AlgebraicNumber::make(coeffs, k, rng);
      Complex box = refine_embedding(a, mpq_class(1, 1 << 28));
      CHECK(eval_interval(coeffs, box).contains_zero());
    }
  }
}

TEST_CASE("construction validates irreducibility and range") {
  Rng rng(42);
  CHECK_THROWS_AS(AlgebraicNumber::make(zp({-1, 0, 1}), 0, rng), ReducibleMinpoly);
  CHECK_THROWS_AS(AlgebraicNumber::make(zp({-4, 0, 1}), 0, rng), ReducibleMinpoly);
  CHECK_THROWS(AlgebraicNumber::make(zp({-2, 0, 1}), 5, rng));
}

TEST_CASE("nearest picks the embedding closest to the hint") {
  Rng rng(43);
  AlgebraicNumber pos = AlgebraicNumber::nearest(zp({-2, 0, 1}), 1.4, 0.0, rng);
  AlgebraicNumber neg = AlgebraicNumber::nearest(zp({-2, 0, 1}), -1.4, 0.0, rng);
  CHECK(pos.embedding != neg.embedding);
  CHECK(refine_embedding(pos, mpq_class(1, 1024)).re.certainly_gt(Real::from_long(0)));
  CHECK(refine_embedding(neg, mpq_class(1, 1024)).re.certainly_lt(Real::from_long(0)));
  CHECK(embedding_is_real(pos));
}

TEST_CASE("rational degree-one numbers expose their value") {
  AlgebraicNumber r = AlgebraicNumber::from_rational(mpq_class(-7, 3));
  CHECK(r.is_rational());
  CHECK(r.rational_value() == mpq_class(-7, 3));
  CHECK(r.degree() == 1);
}

TEST_CASE("number-field arithmetic satisfies field laws") {
  ZPoly m = zp({-2, 0, 1});
  Rng rng(44);
  for (int t = 0; t < 60; ++t) {
    QPoly a, b;
    for (int i = 0; i < 2; ++i) {
      mpq_class ca(rng.range(-5, 5), rng.range(1, 4));
      ca.canonicalize();
      mpq_class cb(rng.range(-5, 5), rng.range(1, 4));
      cb.canonicalize();
      a.c.push_back(ca);
      b.c.push_back(cb);
    }
    a.normalize();
    b.normalize();
    QPoly ab = nf_mul(a, b, m);
    CHECK(nf_sub(nf_mul(b, a, m), ab, m).degree() < 0);
    if (a.degree() >= 0) {
      QPoly inv = nf_inv(a, m);
      QPoly one = nf_mul(a, inv, m);
      REQUIRE(one.degree() == 0);
      CHECK(one.c[0] == 1);
    }
    // the defining relation: z^2 reduces to 2
    QPoly z;
    z.c = {mpq_class(0), mpq_class(1)};
    QPoly zz = nf_mul(z, z, m);
    REQUIRE(zz.degree() == 0);
    CHECK(zz.c[0] == 2);
  }
  QPoly zero;
  CHECK_THROWS_AS(nf_inv(zero, m), DivisionByZero);
}

TEST_CASE("compositum of two quadratics is the expected quartic") {
  Rng rng(45);
  AlgebraicNumber r2 = AlgebraicNumber::nearest(zp({-2, 0, 1}), 1.41, 0.0, rng);
  AlgebraicNumber r3 = AlgebraicNumber::nearest(zp({-3, 0, 1}), 1.73, 0.0, rng);
  Compositum comp = primitive_element(r2, r3, rng);
  CHECK(comp.gamma.degree() == 4);
  // both representatives land back on the inputs under the embedding
  Complex gbox = refine_embedding(comp.gamma, mpq_class(1, mpz_class(mpz_class(1) << 80)));
  auto lands_on = [&](const QPoly& rep, const AlgebraicNumber& target) {
    mpz_class den;
    ZPoly num = z_from_q(rep, &den);
    Complex v = eval_interval(num, gbox);
    Real value = v.re / Real::from_mpz(den);
    CHECK(v.im.contains(mpq_class(0)));
    CHECK(value.overlaps(refine_embedding(target, mpq_class(1, 1 << 30)).re));
  };
  lands_on(comp.a1_rep, r2);
  lands_on(comp.a2_rep, r3);
}

TEST_CASE("continued fraction of sqrt2 is the periodic pattern") {
  Rng rng(46);
  AlgebraicNumber r2 = AlgebraicNumber::nearest(zp({-2, 0, 1}), 1.41, 0.0, rng);
  ContinuedFraction cf = cf_expand(r2, 8);
  REQUIRE(cf.partial_quotients.size() == 8);
  CHECK(cf.partial_quotients[0] == 1);
  for (size_t i = 1; i < 8; ++i) CHECK(cf.partial_quotients[i] == 2);
  REQUIRE(cf.convergents.size() == 8);
  CHECK(cf.convergents[0] == std::make_pair(mpz_class(1), mpz_class(1)));
  CHECK(cf.convergents[1] == std::make_pair(mpz_class(3), mpz_class(2)));
  CHECK(cf.convergents[3] == std::make_pair(mpz_class(17), mpz_class(12)));
  // recurrence p_k = a_k p_{k-1} + p_{k-2}
  for (size_t k = 2; k < 8; ++k) {
    CHECK(cf.convergents[k].first ==
          cf.partial_quotients[k] * cf.convergents[k - 1].first + cf.convergents[k - 2].first);
    CHECK(cf.convergents[k].second ==
          cf.partial_quotients[k] * cf.convergents[k - 1].second + cf.convergents[k - 2].second);
  }
  auto pts = cf_convergents(r2, 5);
  REQUIRE(pts.size() == 5);
  CHECK(pts[2] == ProjPoint::make(7, 5));
}

TEST_CASE("rational continued fractions terminate with the euclidean data") {
  AlgebraicNumber r = AlgebraicNumber::from_rational(mpq_class(17, 12));
  ContinuedFraction cf = cf_expand(r, 32);
  CHECK(cf.partial_quotients.size() < 32);
  REQUIRE(!cf.convergents.empty());
  CHECK(cf.convergents.back() == std::make_pair(mpz_class(17), mpz_class(12)));
}

TEST_CASE("projective points canonicalize coprime with positive sign") {
  CHECK(ProjPoint::make(4, 6) == ProjPoint::make(2, 3));
  CHECK(ProjPoint::make(-4, -6) == ProjPoint::make(2, 3));
  CHECK(ProjPoint::make(4, -6) == ProjPoint::make(-2, 3));
  CHECK(ProjPoint::make(-5, 0) == ProjPoint::make(1, 0));
  mpq_class r(22, 8);
  r.canonicalize();
  CHECK(ProjPoint::from_rational(r) == ProjPoint::make(11, 4));
  CHECK(ProjPoint::make(11, 4).affine() == mpq_class(11, 4));
}
