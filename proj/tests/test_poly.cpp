#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tsd/bipoly.hpp"
#include "tsd/poly.hpp"
#include "tsd/util.hpp"

using namespace tsd;

static ZPoly zp(std::initializer_list<long> v) {
  ZPoly p;
  for (long x : v) p.c.push_back(mpz_class(x));
  p.normalize();
  return p;
}

static ZPoly rnd_poly(Rng& rng, int maxdeg) {
  ZPoly p;
  int d = int(rng.range(0, maxdeg));
  for (int i = 0; i <= d; ++i) p.c.push_back(mpz_class(rng.range(-9, 9)));
  p.normalize();
  return p;
}

static BiPoly rnd_bipoly(Rng& rng, int dx, int dy) {
  BiPoly f;
  for (int i = 0; i <= dx; ++i)
    for (int j = 0; j <= dy; ++j)
      f = f + BiPoly::monomial(i, j, mpz_class(rng.range(-5, 5)));
  return f;
}

TEST_CASE("ring laws hold on random polynomials") {
  Rng rng(21);
  for (int t = 0; t < 80; ++t) {
    ZPoly a = rnd_poly(rng, 6), b = rnd_poly(rng, 6), c = rnd_poly(rng, 6);
    CHECK((a * b).c == (b * a).c);
    CHECK(((a + b) * c).c == (a * c + b * c).c);
    mpz_class x(rng.range(-7, 7));
    CHECK(eval_z(a * b, x) == eval_z(a, x) * eval_z(b, x));
    CHECK(eval_z(a + b, x) == eval_z(a, x) + eval_z(b, x));
  }
}

TEST_CASE("division, gcd and resultant agree with products") {
  Rng rng(22);
  for (int t = 0; t < 50; ++t) {
    ZPoly a = rnd_poly(rng, 4), b = rnd_poly(rng, 4);
    if (a.degree() < 0 || b.degree() < 0) continue;
    ZPoly prod = a * b;
    auto quo = divide_exact(prod, a);
    REQUIRE(quo.has_value());
    CHECK((*quo * a).c == prod.c);
    // gcd of f*g and f*h is divisible by f (up to content)
    ZPoly h = rnd_poly(rng, 3);
    if (h.degree() < 0) continue;
    ZPoly g = gcd_z(a * b, a * h);
    CHECK(divide_exact(g, primitive_part(a)).has_value());
  }
  // resultant vanishes exactly on a shared root
  ZPoly f = zp({-2, 0, 1}) * zp({-1, 1});
  ZPoly g = zp({-2, 0, 1}) * zp({1, 1});
  CHECK(resultant(f, g) == 0);
  CHECK(resultant(zp({-2, 0, 1}), zp({-3, 0, 1})) != 0);
}

TEST_CASE("squarefree decomposition reassembles with multiplicities") {
  ZPoly f = zp({-1, 1}) * zp({-1, 1}) * zp({-1, 1}) * zp({-2, 0, 1}) * zp({5});
  auto dec = squarefree_decomposition(f);
  ZPoly prod = zp({1});
  bool saw_cubed = false;
  for (const auto& [g, m] : dec) {
    for (int i = 0; i < m; ++i) prod = prod * g;
    if (m == 3 && g.degree() == 1) saw_cubed = true;
  }
  CHECK(saw_cubed);
  CHECK(primitive_part(prod).c == primitive_part(f).c);
}

TEST_CASE("taylor shift is evaluation-compatible and invertible") {
  Rng rng(23);
  for (int t = 0; t < 50; ++t) {
    ZPoly f = rnd_poly(rng, 6);
    mpz_class a(rng.range(-5, 5));
    ZPoly g = taylor_shift(f, a);
    mpz_class x(rng.range(-4, 4));
    CHECK(eval_z(g, x) == eval_z(f, mpz_class(x + a)));
    CHECK(taylor_shift(g, mpz_class(-a)).c == f.c);
  }
}

TEST_CASE("real root isolation finds exactly the real roots") {
  // (x^2-2)(x^2-3)(x^2+1): four real roots, one complex pair
  ZPoly f = zp({-2, 0, 1}) * zp({-3, 0, 1}) * zp({1, 0, 1});
  auto boxes = isolate_real_roots(f);
  REQUIRE(boxes.size() == 4);
  mpq_class w(1, mpz_class(mpz_class(1) << 60));
  double expect[4] = {-1.7320508075688772, -1.4142135623730951, 1.4142135623730951,
                      1.7320508075688772};
  for (size_t i = 0; i < 4; ++i) {
    auto r = refine_real_root(f, boxes[i], w);
    CHECK(mpq_class(r.second - r.first) <= w);
    double mid = (r.first.get_d() + r.second.get_d()) / 2;
    CHECK(std::fabs(mid - expect[i]) < 1e-9);
    // sign change certifies the root
    CHECK(eval_q(f, r.first) * eval_q(f, r.second) <= 0);
  }
  CHECK(isolate_real_roots(zp({1, 0, 1})).empty());
}

TEST_CASE("complex root boxes cover all roots and the polynomial vanishes") {
  ZPoly f = zp({-2, 0, 1}) * zp({1, 0, 1}) * zp({-7, 3});
  mpq_class w(1, 1 << 20);
  auto roots = isolate_all_roots(f, w);
  REQUIRE(int(roots.size()) == f.degree());
  for (const auto& z : roots) CHECK(eval_interval(f, z).contains_zero());
}

TEST_CASE("divided derivatives match the binomial monomial rule") {
  Rng rng(24);
  for (int t = 0; t < 200; ++t) {
    int dx = int(rng.range(0, 5)), dy = int(rng.range(0, 5));
    BiPoly f = rnd_bipoly(rng, dx, dy);
    int i = int(rng.range(0, 5)), j = int(rng.range(0, 5));
    BiPoly d = divided_derivative(f, i, j);
    BiPoly expect;
    for (int u = 0; u <= f.degx(); ++u)
      for (int v = 0; v <= f.degy(); ++v) {
        if (u < i || v < j) continue;
        mpz_class coef = f.coeff(u, v) * binomial(u, i) * binomial(v, j);
        expect = expect + BiPoly::monomial(u - i, v - j, coef);
      }
    CHECK(d.c == expect.c);
  }
}

TEST_CASE("divided derivatives compose with binomial factors") {
  Rng rng(25);
  for (int t = 0; t < 100; ++t) {
    BiPoly f = rnd_bipoly(rng, 5, 5);
    int i = int(rng.range(0, 2)), j = int(rng.range(0, 2));
    int k = int(rng.range(0, 3)), l = int(rng.range(0, 3));
    BiPoly lhs = divided_derivative(divided_derivative(f, k, l), i, j);
    BiPoly rhs = binomial(i + k, i) * (binomial(j + l, j) * divided_derivative(f, i + k, j + l));
    CHECK(lhs.c == rhs.c);
  }
}

TEST_CASE("leibniz rule for divided derivatives of a product") {
  Rng rng(26);
  for (int t = 0; t < 100; ++t) {
    BiPoly f = rnd_bipoly(rng, 3, 3), g = rnd_bipoly(rng, 3, 3);
    int k = int(rng.range(0, 4)), l = int(rng.range(0, 4));
    BiPoly lhs = divided_derivative(f * g, k, l);
    BiPoly rhs;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= l; ++j)
        rhs = rhs + divided_derivative(f, i, j) * divided_derivative(g, k - i, l - j);
    CHECK(lhs.c == rhs.c);
  }
}

TEST_CASE("divided jets reproduce the taylor expansion exactly") {
  Rng rng(27);
  for (int t = 0; t < 30; ++t) {
    BiPoly f = rnd_bipoly(rng, 4, 4);
    mpq_class x(rng.range(-3, 3), rng.range(1, 4)), y(rng.range(-3, 3), rng.range(1, 4));
    x.canonicalize();
    y.canonicalize();
    mpq_class hx(1, 7), hy(1, 11);
    mpq_class sum = 0, powx = 1;
    for (int i = 0; i <= f.degx(); ++i) {
      mpq_class powy = 1;
      for (int j = 0; j <= f.degy(); ++j) {
        sum += eval_qq(divided_derivative(f, i, j), x, y) * powx * powy;
        powy *= hy;
      }
      powx *= hx;
    }
    CHECK(sum == eval_qq(f, mpq_class(x + hx), mpq_class(y + hy)));
  }
}

TEST_CASE("bipoly serialization round-trips") {
  Rng rng(28);
  for (int t = 0; t < 20; ++t) {
    BiPoly f = rnd_bipoly(rng, 4, 3);
    BiPoly g = bipoly_from_json(bipoly_to_json(f));
    CHECK(f.c == g.c);
  }
}
