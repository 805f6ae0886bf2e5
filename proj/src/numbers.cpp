#include "tsd/numbers.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "tsd/factor.hpp"

namespace tsd {

namespace {

mpz_class mpq_floor_z(const mpq_class& x) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

ZPoly zpow(const ZPoly& f, int e) {
  ZPoly r{mpz_class(1)};
  for (int i = 0; i < e; ++i) r = r * f;
  return r;
}

ZPoly lc_in_y(const BiPoly& f) { return y_coefficients(f).back(); }

} // namespace

mpq_class AlgebraicNumber::rational_value() const {
  if (degree() != 1) throw std::logic_error("rational_value on a nonrational number");
  mpq_class v(-minpoly.c[0], minpoly.c[1]);
  v.canonicalize();
  return v;
}

AlgebraicNumber AlgebraicNumber::make(const ZPoly& minpoly, int embedding, Rng& rng) {
  if (minpoly.degree() < 1) throw ZeroPolynomial("minimal polynomial must be nonconstant");
  ZPoly m = primitive_part(minpoly);
  if (m.degree() >= 2 && !is_irreducible_z(m, rng))
    throw ReducibleMinpoly("polynomial is not irreducible over Q");
  if (embedding < 0 || embedding >= m.degree())
    throw std::out_of_range("embedding index out of range");
  return AlgebraicNumber{m, embedding};
}

AlgebraicNumber AlgebraicNumber::from_rational(const mpq_class& r) {
  // den*x - num is primitive with positive leading coefficient
  return AlgebraicNumber{ZPoly{-r.get_num(), r.get_den()}, 0};
}

AlgebraicNumber AlgebraicNumber::nearest(const ZPoly& minpoly, double re_hint, double im_hint,
                                         Rng& rng) {
  AlgebraicNumber a = make(minpoly, 0, rng);
  std::vector<Complex> boxes = isolate_all_roots(a.minpoly, mpq_class(1, 1024));
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < boxes.size(); ++i) {
    double dr = boxes[i].re.mid_double() - re_hint;
    double di = boxes[i].im.mid_double() - im_hint;
    double d = dr * dr + di * di;
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  a.embedding = best;
  return a;
}

ProjPoint ProjPoint::make(const mpz_class& a, const mpz_class& b) {
  if (a == 0 && b == 0) throw std::invalid_argument("(0:0) is not a projective point");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  ProjPoint p{a / g, b / g};
  if (p.b < 0 || (p.b == 0 && p.a < 0)) {
    p.a = -p.a;
    p.b = -p.b;
  }
  return p;
}

ProjPoint ProjPoint::from_rational(const mpq_class& r) {
  return ProjPoint{r.get_num(), r.get_den()}; // canonical already
}

mpq_class ProjPoint::affine() const {
  if (b == 0) throw DivisionByZero("affine value of the point at infinity");
  mpq_class v(a, b);
  v.canonicalize();
  return v;
}

Complex refine_embedding(const AlgebraicNumber& a, const mpq_class& width) {
  if (a.is_rational()) {
    mpq_class v = a.rational_value();
    for (mpfr_prec_t p = kDefaultPrec; p <= kMaxPrecisionBits; p *= 2) {
      Real re = Real::from_mpq(v, p);
      if (re.width() <= width) return Complex(re, Real::from_long(0));
    }
    throw PrecisionExhausted("rational enclosure did not reach the requested width");
  }
  return isolate_all_roots(a.minpoly, width)[a.embedding];
}

bool embedding_is_real(const AlgebraicNumber& a) {
  if (a.is_rational()) return true;
  return a.embedding < SturmChain::build(a.minpoly).count_real_roots();
}

std::vector<Complex> conjugate_boxes(const ZPoly& minpoly, const mpq_class& width) {
  return isolate_all_roots(primitive_part(minpoly), width);
}

// ---- continued fractions ----

ContinuedFraction cf_expand(const AlgebraicNumber& a, int count) {
  if (!embedding_is_real(a)) throw NotReal("continued fraction of a non-real embedding");
  ContinuedFraction out;
  mpz_class pm1 = 1, pm2 = 0, qm1 = 0, qm2 = 1;
  auto push = [&](const mpz_class& ak) {
    out.partial_quotients.push_back(ak);
    mpz_class pk = ak * pm1 + pm2;
    mpz_class qk = ak * qm1 + qm2;
    out.convergents.emplace_back(pk, qk);
    pm2 = pm1;
    pm1 = pk;
    qm2 = qm1;
    qm1 = qk;
  };

  if (a.is_rational()) {
    mpq_class r = a.rational_value();
    mpz_class p = r.get_num(), q = r.get_den();
    while (count-- > 0 && q != 0) {
      mpz_class ak, rem;
      mpz_fdiv_qr(ak.get_mpz_t(), rem.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
      push(ak);
      p = q;
      q = rem;
    }
    return out;
  }

  // Lagrange expansion. Invariant: f is irreducible of degree >= 2 (so it has
  // no rational roots), exactly one root alpha of f lies in (u, v), and the
  // endpoints are not roots, so f changes sign across alpha.
  ZPoly f = a.minpoly;
  auto iv = isolate_real_roots(f)[a.embedding]; // real embeddings come first
  mpq_class u = iv.first, v = iv.second;
  for (int k = 0; k < count; ++k) {
    // floor(alpha) by bisection; terminates because alpha is irrational
    while (mpq_floor_z(u) != mpq_floor_z(v)) {
      mpq_class mid = (u + v) / 2;
      if (sgn(eval_q(f, mid)) == sgn(eval_q(f, u)))
        u = mid;
      else
        v = mid;
    }
    mpz_class ak = mpq_floor_z(u);
    push(ak);
    // alpha' = 1/(alpha - ak): reverse the shifted polynomial and map the
    // bracketing interval through the decreasing homeomorphism t -> 1/(t-ak)
    ZPoly shifted = taylor_shift(f, ak);
    ZPoly g = primitive_part(reverse_poly(shifted, shifted.degree()));
    mpq_class ua = u - ak, va = v - ak;
    u = 1 / va;
    v = (ua > 0) ? mpq_class(1 / ua) : mpq_class(root_bound(g) + 1);
    f = g;
  }
  return out;
}

std::vector<ProjPoint> cf_convergents(const AlgebraicNumber& a, int count) {
  ContinuedFraction cf = cf_expand(a, count);
  std::vector<ProjPoint> out;
  out.reserve(cf.convergents.size());
  for (const auto& [p, q] : cf.convergents) out.push_back(ProjPoint{p, q});
  return out;
}

// ---- arithmetic in Q[z]/(m) ----

QPoly nf_reduce(const QPoly& a, const ZPoly& m) {
  if (a.degree() < m.degree()) return a;
  QPoly rem;
  qdivrem(a, q_from_z(m), &rem);
  return rem;
}

QPoly nf_add(const QPoly& a, const QPoly& b, const ZPoly& m) { return nf_reduce(a + b, m); }
QPoly nf_sub(const QPoly& a, const QPoly& b, const ZPoly& m) { return nf_reduce(a - b, m); }
QPoly nf_mul(const QPoly& a, const QPoly& b, const ZPoly& m) { return nf_reduce(a * b, m); }

QPoly nf_inv(const QPoly& a, const ZPoly& m) {
  QPoly ar = nf_reduce(a, m);
  if (ar.is_zero()) throw DivisionByZero("inverse of the zero residue");
  QPoly s, t;
  QPoly g = q_extgcd(ar, q_from_z(m), s, t);
  if (g.degree() != 0) throw DivisionByZero("residue is not invertible");
  return nf_reduce(mpq_class(1 / g.c[0]) * s, m);
}

QPoly nf_pow(const QPoly& a, unsigned long e, const ZPoly& m) {
  QPoly r{mpq_class(1)};
  QPoly base = nf_reduce(a, m);
  while (e) {
    if (e & 1) r = nf_mul(r, base, m);
    base = nf_mul(base, base, m);
    e >>= 1;
  }
  return r;
}

QPoly nf_eval_bipoly(const BiPoly& f, const QPoly& a, const QPoly& b, const ZPoly& m) {
  QPoly acc;
  for (int i = f.degx(); i >= 0; --i) {
    QPoly row;
    for (int j = f.degy(); j >= 0; --j) {
      row = nf_mul(row, b, m);
      mpz_class cij = f.coeff(i, j);
      if (cij != 0) row = nf_add(row, QPoly{mpq_class(cij)}, m);
    }
    acc = nf_add(nf_mul(acc, a, m), row, m);
  }
  return acc;
}

QPoly jet_coefficient(const BiPoly& f, const QPoly& a, const QPoly& b, int i, int j,
                      const ZPoly& m) {
  return nf_eval_bipoly(divided_derivative(f, i, j), a, b, m);
}

Complex nf_embed(const QPoly& rep, const AlgebraicNumber& gamma, const mpq_class& width) {
  QPoly r = nf_reduce(rep, gamma.minpoly);
  mpz_class den;
  ZPoly rz = z_from_q(r, &den);
  mpq_class w = width / 2;
  mpfr_prec_t prec = kDefaultPrec;
  for (int iter = 0; iter < 64; ++iter) {
    Complex zbox = refine_embedding(gamma, w);
    Complex val = Real::from_mpq(mpq_class(mpz_class(1), den), prec) * eval_interval(rz, zbox, prec);
    if (val.re.width() <= width && val.im.width() <= width) return val;
    w /= 16;
    prec += 64;
  }
  throw PrecisionExhausted("representative image did not reach the requested width");
}

// ---- resultants of bivariate polynomials with respect to y ----

// sub-resultant PRS over the coefficient ring Z[x]; all interior divisions
// are exact by the Collins/Brown-Traub theory
ZPoly bi_resultant_y(const BiPoly& a0, const BiPoly& b0) {
  if (a0.is_zero() || b0.is_zero()) return {};
  int da = a0.degy(), db = b0.degy();
  if (da == 0 && db == 0) return ZPoly{mpz_class(1)};
  if (db == 0) return zpow(eval_at_y(b0, 0), da);
  if (da == 0) return zpow(eval_at_y(a0, 0), db);

  BiPoly A = a0, B = b0;
  int sign = 1;
  if (da < db) {
    std::swap(A, B);
    if ((da & 1) && (db & 1)) sign = -sign;
  }
  // contents over Z[x] contribute content^degree of the other argument
  mpz_class ia = integer_content(A), ib = integer_content(B);
  ZPoly ca = ia * content_in_x(A), cb = ib * content_in_x(B);
  A = *bi_divide_exact(A, BiPoly::from_x(ca));
  B = *bi_divide_exact(B, BiPoly::from_x(cb));
  ZPoly acc = zpow(ca, B.degy()) * zpow(cb, A.degy());

  ZPoly g{mpz_class(1)}, h{mpz_class(1)};
  while (true) {
    int dA = A.degy(), dB = B.degy();
    int delta = dA - dB;
    if ((dA & 1) && (dB & 1)) sign = -sign;
    BiPoly R = pseudo_rem_y(A, B);
    A = B;
    if (R.is_zero()) {
      B = R;
      break;
    }
    B = *bi_divide_exact(R, BiPoly::from_x(g * zpow(h, delta)));
    g = lc_in_y(A);
    if (delta == 1)
      h = g;
    else if (delta > 1)
      h = *divide_exact(zpow(g, delta), zpow(h, delta - 1));
    if (B.degy() == 0) break;
  }
  if (B.is_zero()) return {};
  int dA = A.degy();
  ZPoly hf = *divide_exact(zpow(eval_at_y(B, 0), dA), zpow(h, dA - 1));
  ZPoly res = acc * hf;
  return sign < 0 ? -res : res;
}

// ---- compositum ----

namespace {

// polynomials in one variable over Q[z]/(m); entry [i] multiplies y^i
using NPoly = std::vector<QPoly>;

void np_normalize(NPoly& f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
}

NPoly np_monic(const NPoly& f, const ZPoly& m) {
  NPoly r = f;
  QPoly inv = nf_inv(r.back(), m);
  for (auto& cf : r) cf = nf_mul(cf, inv, m);
  return r;
}

// remainder of a modulo monic b
NPoly np_rem(NPoly a, const NPoly& b, const ZPoly& m) {
  int db = static_cast<int>(b.size()) - 1;
  np_normalize(a);
  while (static_cast<int>(a.size()) - 1 >= db) {
    QPoly q = a.back();
    int k = static_cast<int>(a.size()) - 1 - db;
    for (int i = 0; i <= db; ++i) a[i + k] = nf_sub(a[i + k], nf_mul(q, b[i], m), m);
    np_normalize(a);
  }
  return a;
}

NPoly np_gcd(NPoly a, NPoly b, const ZPoly& m) {
  np_normalize(a);
  np_normalize(b);
  while (!b.empty()) {
    NPoly bm = np_monic(b, m);
    NPoly r = np_rem(a, bm, m);
    a = bm;
    b = r;
  }
  return a;
}

NPoly np_mul(const NPoly& a, const NPoly& b, const ZPoly& m) {
  if (a.empty() || b.empty()) return {};
  NPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = nf_add(r[i + j], nf_mul(a[i], b[j], m), m);
  np_normalize(r);
  return r;
}

QPoly nf_eval_zpoly(const ZPoly& f, const QPoly& x, const ZPoly& m) {
  QPoly acc;
  for (int i = f.degree(); i >= 0; --i)
    acc = nf_add(nf_mul(acc, x, m), QPoly{mpq_class(f.c[i])}, m);
  return acc;
}

// m1(x - k*y) as an element of Z[x, y]
BiPoly compose_shift(const ZPoly& m1, long k) {
  BiPoly p = BiPoly::monomial(1, 0) + BiPoly::monomial(0, 1, mpz_class(-k));
  BiPoly acc;
  for (int i = m1.degree(); i >= 0; --i) acc = acc * p + BiPoly::constant(m1.c[i]);
  return acc;
}

} // namespace

Compositum primitive_element(const AlgebraicNumber& a1, const AlgebraicNumber& a2, Rng& rng) {
  const ZPoly& m1 = a1.minpoly;
  const ZPoly& m2 = a2.minpoly;
  for (long t = 1; t <= 100; ++t) {
    long k = (t % 2 == 1) ? (t + 1) / 2 : -(t / 2);
    BiPoly A = compose_shift(m1, k);
    ZPoly D = primitive_part(bi_resultant_y(A, BiPoly::from_y(m2)));
    // k is admissible exactly when all sums alpha1 + k*alpha2 of conjugate
    // pairs are distinct, i.e. when the resultant is squarefree
    if (gcd_z(D, derivative(D)).degree() != 0) continue;
    ZFactorization fd = factor_z(D, rng);

    // pick the factor whose certified evaluation at the gamma box vanishes
    Real kk = Real::from_long(k);
    const ZPoly* chosen = nullptr;
    Complex gb(Real::from_long(0), Real::from_long(0));
    mpq_class w(1, 1024);
    mpfr_prec_t prec = kDefaultPrec;
    for (int trial = 0; trial < 40 && !chosen; ++trial) {
      gb = refine_embedding(a1, w) + kk * refine_embedding(a2, w);
      const ZPoly* hit = nullptr;
      int nhit = 0;
      for (const auto& [fac, mult] : fd.factors) {
        if (eval_interval(fac, gb, prec).contains_zero()) {
          hit = &fac;
          ++nhit;
        }
      }
      if (nhit == 1)
        chosen = hit;
      else {
        w /= 1024;
        prec += 64;
      }
    }
    if (!chosen) throw PrecisionExhausted("could not separate the compositum factors");
    const ZPoly& F = *chosen;

    // embedding index of gamma among the roots of its minimal polynomial
    int idx = -1;
    mpq_class wi(1, 1024);
    for (int trial = 0; trial < 40 && idx < 0; ++trial) {
      Complex gbi = refine_embedding(a1, wi) + kk * refine_embedding(a2, wi);
      std::vector<Complex> boxes = isolate_all_roots(F, wi);
      int hit = -1, nhit = 0;
      for (size_t i = 0; i < boxes.size(); ++i) {
        if (!disjoint(boxes[i], gbi)) {
          hit = static_cast<int>(i);
          ++nhit;
        }
      }
      if (nhit == 1)
        idx = hit;
      else
        wi /= 1024;
    }
    if (idx < 0) throw PrecisionExhausted("could not separate the compositum embedding");
    AlgebraicNumber gamma{F, idx};

    // alpha2 is the unique common root of m2(y) and m1(gamma - k*y), so the
    // gcd over Q(gamma) is linear and exposes it
    NPoly g1(m2.c.size());
    for (size_t i = 0; i < m2.c.size(); ++i) g1[i] = QPoly{mpq_class(m2.c[i])};
    NPoly p{QPoly::x_power(1), QPoly{mpq_class(-k)}};
    NPoly g2;
    for (int i = m1.degree(); i >= 0; --i) {
      g2 = np_mul(g2, p, F);
      if (m1.c[i] != 0) {
        if (g2.empty()) g2.resize(1);
        g2[0] = nf_add(g2[0], QPoly{mpq_class(m1.c[i])}, F);
        np_normalize(g2);
      }
    }
    NPoly g = np_gcd(g1, g2, F);
    if (g.size() != 2) continue;
    g = np_monic(g, F);
    QPoly a2_rep = nf_reduce(-g[0], F);
    QPoly a1_rep = nf_sub(QPoly::x_power(1), mpq_class(k) * a2_rep, F);
    if (!nf_eval_zpoly(m1, a1_rep, F).is_zero() || !nf_eval_zpoly(m2, a2_rep, F).is_zero())
      throw std::logic_error("compositum representatives failed verification");
    return Compositum{gamma, k, a1_rep, a2_rep};
  }
  throw std::runtime_error("no admissible multiplier for the primitive element");
}

} // namespace tsd
