#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsd/interval.hpp"
#include "tsd/util.hpp"

using namespace tsd;

static mpq_class rnd_q(Rng& rng) {
  mpq_class q(rng.range(-50, 50), rng.range(1, 20));
  q.canonicalize();
  return q;
}

TEST_CASE("field operations enclose exact rational arithmetic") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    mpq_class a = rnd_q(rng), b = rnd_q(rng);
    Real ra = Real::from_mpq(a), rb = Real::from_mpq(b);
    CHECK((ra + rb).contains(mpq_class(a + b)));
    CHECK((ra - rb).contains(mpq_class(a - b)));
    CHECK((ra * rb).contains(mpq_class(a * b)));
    if (b != 0) CHECK((ra / rb).contains(mpq_class(a / b)));
    CHECK(sqr(ra).contains(mpq_class(a * a)));
    CHECK(abs(ra).contains(mpq_class(abs(a))));
  }
}

TEST_CASE("sqrt and log round trips contain their arguments") {
  Rng rng(12);
  for (int t = 0; t < 60; ++t) {
    mpq_class a = rnd_q(rng);
    Real ra = Real::from_mpq(a);
    CHECK(sqrt(sqr(ra)).contains(mpq_class(abs(a))));
    if (a > 0) {
      Real again = exp(log(Real::from_mpq(a)));
      CHECK(again.contains(a));
    }
  }
}

TEST_CASE("pow_ui matches repeated multiplication") {
  Rng rng(13);
  for (int t = 0; t < 40; ++t) {
    mpq_class a = rnd_q(rng);
    unsigned e = unsigned(rng.range(0, 6));
    mpq_class exact = 1;
    for (unsigned i = 0; i < e; ++i) exact *= a;
    CHECK(pow_ui(Real::from_mpq(a), e).contains(exact));
  }
}

TEST_CASE("exact values have zero width and decided signs") {
  Real z;
  CHECK(z.is_exact_zero());
  CHECK(z.certain_sign() == 0);
  CHECK(z.width_string() == std::string("0"));

  Real five = Real::from_long(5);
  CHECK(five.certain_sign() == 1);
  CHECK(five.width() == 0);
  CHECK(Real::from_long(-3).certain_sign() == -1);

  // a third is not a binary fraction: the enclosure is strict but tight
  Real third = Real::from_mpq(mpq_class(1, 3));
  CHECK(third.contains(mpq_class(1, 3)));
  CHECK(third.width() > 0);
  CHECK(third.width() < mpq_class(1, mpz_class(mpz_class(1) << 100)));
}

TEST_CASE("comparisons are decided exactly on disjoint intervals") {
  Real a = hull(Real::from_long(1), Real::from_long(2));
  Real b = hull(Real::from_long(3), Real::from_long(4));
  CHECK(a.certainly_lt(b));
  CHECK(a.certainly_le(b));
  CHECK(b.certainly_gt(a));
  CHECK_FALSE(a.certainly_gt(b));

  Real c = hull(Real::from_mpq(mpq_class(3, 2)), Real::from_mpq(mpq_class(5, 2)));
  CHECK(a.overlaps(c));
  CHECK_FALSE(a.certainly_lt(c));
  CHECK_FALSE(a.certainly_gt(c));
}

TEST_CASE("hull, min and max contain the pointwise results") {
  Rng rng(14);
  for (int t = 0; t < 60; ++t) {
    mpq_class a = rnd_q(rng), b = rnd_q(rng);
    Real ra = Real::from_mpq(a), rb = Real::from_mpq(b);
    CHECK(hull(ra, rb).contains(a));
    CHECK(hull(ra, rb).contains(b));
    CHECK(min(ra, rb).contains(std::min(a, b)));
    CHECK(max(ra, rb).contains(std::max(a, b)));
  }
}

TEST_CASE("log helpers agree with the generic path") {
  for (unsigned long n : {2ul, 7ul, 97ul, 100003ul}) {
    Real a = log_of_ulong(n);
    Real b = log(Real::from_long(long(n)));
    CHECK(a.overlaps(b));
    Real c = log_of_mpq(mpq_class(long(n)));
    CHECK(c.overlaps(b));
  }
  // log respects quotients: log(6/5) = log 6 - log 5
  Real lhs = log_of_mpq(mpq_class(6, 5));
  Real rhs = log_of_ulong(6) - log_of_ulong(5);
  CHECK(lhs.overlaps(rhs));
}

TEST_CASE("complex arithmetic encloses exact gaussian rationals") {
  Rng rng(15);
  for (int t = 0; t < 60; ++t) {
    mpq_class ar = rnd_q(rng), ai = rnd_q(rng), br = rnd_q(rng), bi = rnd_q(rng);
    Complex a = Complex::from_mpq(ar, ai), b = Complex::from_mpq(br, bi);
    Complex p = a * b;
    CHECK(p.re.contains(mpq_class(ar * br - ai * bi)));
    CHECK(p.im.contains(mpq_class(ar * bi + ai * br)));
    CHECK(abs_sq(a).contains(mpq_class(ar * ar + ai * ai)));
  }
  Complex z = Complex::from_mpq(mpq_class(0), mpq_class(0));
  CHECK(z.contains_zero());
  Complex w = Complex::from_mpq(mpq_class(1), mpq_class(1));
  CHECK_FALSE(w.contains_zero());
  CHECK(disjoint(w, Complex::from_mpq(mpq_class(-1), mpq_class(1))));
}

TEST_CASE("string output is scientific with pinned digit count") {
  Real r = Real::from_mpq(mpq_class(1, 3));
  std::string s = r.to_string(15);
  CHECK(s.find("3.33333333333333") == 0);
  CHECK(s.find("e-01") != std::string::npos);
}
