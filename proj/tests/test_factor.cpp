#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsd/bipoly.hpp"
#include "tsd/factor.hpp"
#include "tsd/util.hpp"

using namespace tsd;

static ZPoly zp(std::initializer_list<long> v) {
  ZPoly p;
  for (long x : v) p.c.push_back(mpz_class(x));
  p.normalize();
  return p;
}

static ZPoly zfac_product(const ZFactorization& fac) {
  ZPoly prod = zp({1});
  for (const auto& [g, m] : fac.factors)
    for (int i = 0; i < m; ++i) prod = prod * g;
  mpz_class den = fac.unit.get_den();
  ZPoly scaled;
  for (const auto& c : prod.c) scaled.c.push_back(mpz_class(c * fac.unit.get_num()));
  for (auto& c : scaled.c) {
    mpq_class exact(c, den);
    exact.canonicalize();
    REQUIRE(exact.get_den() == 1);
    c = exact.get_num();
  }
  scaled.normalize();
  return scaled;
}

TEST_CASE("univariate factorization reassembles seeded products") {
  Rng rng(31);
  std::vector<ZPoly> pool = {zp({-2, 0, 1}), zp({-3, 0, 1}), zp({-1, 1}), zp({1, 1}),
                             zp({1, 1, 1}),  zp({-1, 0, 0, 2}), zp({7, -2})};
  for (int t = 0; t < 40; ++t) {
    ZPoly f = zp({long(rng.range(1, 6))});
    int parts = int(rng.range(1, 4));
    for (int i = 0; i < parts; ++i) f = f * pool[size_t(rng.range(0, long(pool.size()) - 1))];
    auto fac = factor_z(f, rng);
    CHECK(zfac_product(fac).c == f.c);
    for (const auto& [g, m] : fac.factors) {
      CHECK(m >= 1);
      CHECK(is_irreducible_z(g, rng));
      CHECK(content(g) == 1);
      CHECK(g.c.back() > 0);
    }
  }
}

TEST_CASE("repeated factors come back with the right multiplicity") {
  Rng rng(32);
  ZPoly f = zp({-1, 1}) * zp({-1, 1}) * zp({-2, 0, 1}) * zp({-2, 0, 1}) * zp({-2, 0, 1});
  for (auto& c : f.c) c *= -12;
  auto fac = factor_z(f, rng);
  int seen_linear = 0, seen_quad = 0;
  for (const auto& [g, m] : fac.factors) {
    if (g.degree() == 1) { seen_linear = m; }
    if (g.degree() == 2) { seen_quad = m; }
  }
  CHECK(seen_linear == 2);
  CHECK(seen_quad == 3);
  CHECK(fac.unit == -12);
  CHECK(zfac_product(fac).c == f.c);
}

TEST_CASE("irreducibility verdicts on known cases") {
  Rng rng(33);
  CHECK(is_irreducible_z(zp({-2, 0, 1}), rng));
  CHECK(is_irreducible_z(zp({-2, 0, 0, 1}), rng));
  CHECK(is_irreducible_z(zp({1, 1, 1, 1, 1}), rng));      // 5th cyclotomic
  CHECK(is_irreducible_z(zp({1, 0, -16, 1}), rng));
  CHECK_FALSE(is_irreducible_z(zp({-1, 0, 1}), rng));     // (x-1)(x+1)
  CHECK_FALSE(is_irreducible_z(zp({-4, 0, 1}), rng));
  CHECK_FALSE(is_irreducible_z(zp({1, 2, 1}), rng));
}

TEST_CASE("bivariate factorization splits mixed products") {
  Rng rng(34);
  BiPoly x = BiPoly::monomial(1, 0), y = BiPoly::monomial(0, 1);
  BiPoly f = (x - y) * (x - y) * (x + y + BiPoly::constant(1)) * BiPoly::from_x(zp({-2, 0, 1}));
  auto fac = factor_bi(f, rng);
  BiPoly prod = BiPoly::constant(1);
  for (const auto& [g, m] : fac.factors)
    for (int i = 0; i < m; ++i) prod = prod * g;
  REQUIRE(fac.unit.get_den() == 1);
  prod = fac.unit.get_num() * prod;
  CHECK(prod.c == f.c);
  bool saw_diag_squared = false;
  for (const auto& [g, m] : fac.factors)
    if (m == 2 && g.degx() == 1 && g.degy() == 1) saw_diag_squared = true;
  CHECK(saw_diag_squared);
}

TEST_CASE("integer factorization is exact and certified prime") {
  Rng rng(35);
  for (int t = 0; t < 30; ++t) {
    mpz_class n = rng.mpz_range(2, mpz_class("100000000000000"));
    auto fac = factor_integer(n);
    mpz_class prod = 1;
    for (const auto& [p, e] : fac) {
      CHECK(e >= 1);
      CHECK(mpz_probab_prime_p(p.get_mpz_t(), 40) > 0);
      for (unsigned i = 0; i < e; ++i) prod *= p;
    }
    CHECK(prod == n);
  }
  auto twos = factor_integer(mpz_class(1024));
  REQUIRE(twos.size() == 1);
  CHECK(twos[0].first == 2);
  CHECK(twos[0].second == 10);
}
