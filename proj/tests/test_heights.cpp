#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsd/heights.hpp"
#include "tsd/numbers.hpp"
#include "tsd/util.hpp"

using namespace tsd;

static ZPoly zp(std::initializer_list<long> v) {
  ZPoly p;
  for (long x : v) p.c.push_back(mpz_class(x));
  p.normalize();
  return p;
}

static ProjPoint rnd_point(Rng& rng, const DivisorData& avoid) {
  for (;;) {
    mpz_class a = rng.mpz_range(-100000, 100000), b = rng.mpz_range(-100000, 100000);
    if (a == 0 && b == 0) continue;
    ProjPoint p = ProjPoint::make(a, b);
    if (avoid.value_at(p) != 0) return p;
  }
}

TEST_CASE("product formula: local heights sum to the global height") {
  Rng rng(51);
  std::vector<DivisorData> divisors = {DivisorData::make(zp({-2, 0, 1}), 2),
                                       DivisorData::make(zp({-2, 0, 0, 1}), 3),
                                       DivisorData::make(zp({-3, 2}), 1)};
  for (const auto& d : divisors) {
    for (int t = 0; t < 50; ++t) {
      ProjPoint p = rnd_point(rng, d);
      Real total = weil_sum(d, p);
      Real expect = Real::from_long(d.deg) * fs_height(p);
      Real diff = total - expect;
      CHECK(diff.contains(mpq_class(0)));
      CHECK(diff.width() < mpq_class(1, 1000000000));
    }
  }
}

TEST_CASE("finite local heights are the exact valuation times log p") {
  Rng rng(52);
  DivisorData d = DivisorData::make(zp({-2, 0, 1}), 2); // a^2 - 2 b^2
  for (int t = 0; t < 40; ++t) {
    ProjPoint p = rnd_point(rng, d);
    mpz_class value = abs(d.value_at(p));
    for (const auto& [q, e] : factor_integer(value)) {
      Real lambda = weil_local(d, Place::at_prime(q), p);
      Real expect = Real::from_long(long(e)) * log_of_mpq(mpq_class(q));
      CHECK(lambda.lo_rational() == expect.lo_rational());
      CHECK(lambda.hi_rational() == expect.hi_rational());
    }
    // places outside the support contribute exactly zero
    mpz_class outside = 1000003;
    if (value % outside != 0)
      CHECK(weil_local(d, Place::at_prime(outside), p).is_exact_zero());
  }
}

TEST_CASE("archimedean height is bounded below by the sup-norm constant") {
  Rng rng(53);
  DivisorData d = DivisorData::make(zp({-2, 0, 1}), 2);
  Real floor = -log(Real::from_mpz(form_sup_bound(d)));
  for (int t = 0; t < 60; ++t) {
    ProjPoint p = rnd_point(rng, d);
    CHECK(!weil_local(d, Place::archimedean(), p).certainly_lt(floor));
  }
}

TEST_CASE("fubini-study height is scaling invariant and explicit") {
  CHECK(fs_height(ProjPoint::make(3, 4)).contains(mpq_class(0)) == false);
  // (3:4) and (30:40) canonicalize to the same point
  Real a = fs_height(ProjPoint::make(3, 4));
  Real b = fs_height(ProjPoint::make(30, 40));
  CHECK(a.lo_rational() == b.lo_rational());
  // h(1:0) = 0 and h(1:1) = log sqrt 2
  CHECK(fs_height(ProjPoint::make(1, 0)).is_exact_zero());
  Real diag = fs_height(ProjPoint::make(1, 1));
  Real half_log2 = log_of_ulong(2) / Real::from_long(2);
  CHECK(diag.overlaps(half_log2));
}

TEST_CASE("divisor data from algebraic numbers evaluates the minimal form") {
  Rng rng(54);
  AlgebraicNumber r2 = AlgebraicNumber::nearest(zp({-2, 0, 1}), 1.41, 0.0, rng);
  DivisorData d = DivisorData::from_algnum(r2);
  CHECK(d.deg >= 2);
  CHECK(d.value_at(ProjPoint::make(17, 12)) == mpz_class(1));  // 17^2 - 2*12^2
  CHECK(d.value_at(ProjPoint::make(3, 2)) == mpz_class(1));
  CHECK(d.value_at(ProjPoint::make(7, 5)) == mpz_class(-1));
}

TEST_CASE("phi weights validate their defining constraints") {
  using entries_t = std::vector<std::pair<Place, mpq_class>>;
  PhiWeights ok = PhiWeights::make(
      entries_t{{Place::archimedean(), mpq_class(1, 2)}, {Place::at_prime(2), mpq_class(1, 2)}});
  CHECK(ok.at(Place::archimedean()) == mpq_class(1, 2));
  CHECK(ok.at(Place::at_prime(7)) == 0);
  CHECK_THROWS(PhiWeights::make(entries_t{{Place::archimedean(), mpq_class(1, 2)}}));
  CHECK_THROWS(PhiWeights::make(
      entries_t{{Place::archimedean(), mpq_class(2)}, {Place::at_prime(2), mpq_class(-1)}}));
  CHECK_THROWS(PhiWeights::make(
      entries_t{{Place::archimedean(), mpq_class(1, 2)}, {Place::archimedean(), mpq_class(1, 2)}}));
}

TEST_CASE("metric comparison constant is a tight interval at zero") {
  Real c0 = metric_comparison_constant();
  CHECK(c0.contains(mpq_class(0)));
  CHECK(c0.width() < mpq_class(1, 1000000));
}

TEST_CASE("t invariants respect their clamps") {
  DivisorData d = DivisorData::make(zp({-2, 0, 1}), 2);
  TInvariant t = t_of_divisor(d);
  CHECK(t.big_h.certainly_ge(Real::from_long(1)));
  CHECK(!t.big_h.certainly_lt(t.h));
  CHECK(t.s.certainly_ge(Real::from_long(1)));
  Real st = t.s * t.big_h;
  CHECK(t.t.overlaps(st));
}

TEST_CASE("approximation quality of known convergents") {
  Rng rng(55);
  AlgebraicNumber r2 = AlgebraicNumber::nearest(zp({-2, 0, 1}), 1.41, 0.0, rng);
  // kappa(7/5) = -log|sqrt2 - 7/5| / log 7, about 2.19
  Real k = approx_quality(r2, ProjPoint::make(7, 5));
  CHECK(k.certainly_gt(Real::from_mpq(mpq_class(21, 10))));
  CHECK(k.certainly_lt(Real::from_mpq(mpq_class(22, 10))));
  // a poor approximation scores under 1
  Real bad = approx_quality(r2, ProjPoint::make(100, 3));
  CHECK(bad.certainly_lt(Real::from_long(1)));
}

TEST_CASE("omega height tracks minus twice the fubini-study height") {
  Rng rng(56);
  for (int t = 0; t < 30; ++t) {
    mpz_class a = rng.mpz_range(-1000, 1000), b = rng.mpz_range(-1000, 1000);
    if (a == 0 && b == 0) continue;
    ProjPoint p = ProjPoint::make(a, b);
    Real expect = Real::from_long(-2) * fs_height(p) + metric_comparison_constant();
    CHECK(h_omega(p).overlaps(expect));
  }
}
