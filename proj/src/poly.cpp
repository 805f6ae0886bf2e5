#include "tsd/poly.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace tsd {

mpq_class eval_q(const ZPoly& f, const mpq_class& x) {
  mpq_class acc = 0;
  for (int i = f.degree(); i >= 0; --i) acc = acc * x + f.c[i];
  return acc;
}

mpz_class eval_z(const ZPoly& f, const mpz_class& x) {
  mpz_class acc = 0;
  for (int i = f.degree(); i >= 0; --i) acc = acc * x + f.c[i];
  return acc;
}

Real eval_interval(const ZPoly& f, const Real& x, mpfr_prec_t prec) {
  Real acc = Real::from_long(0);
  for (int i = f.degree(); i >= 0; --i)
    acc = acc * x + Real::from_mpz(f.c[i], prec);
  return acc;
}

Complex eval_interval(const ZPoly& f, const Complex& x, mpfr_prec_t prec) {
  Complex acc(Real::from_long(0), Real::from_long(0));
  for (int i = f.degree(); i >= 0; --i) {
    acc = acc * x;
    acc.re = acc.re + Real::from_mpz(f.c[i], prec);
  }
  return acc;
}

mpz_class eval_homogeneous(const ZPoly& f, int deg, const mpz_class& a, const mpz_class& b) {
  // sum of f.c[i] * a^i * b^(deg-i)
  mpz_class acc = 0, apow = 1;
  std::vector<mpz_class> bpow(deg + 1);
  bpow[0] = 1;
  for (int i = 1; i <= deg; ++i) bpow[i] = bpow[i - 1] * b;
  for (int i = 0; i <= deg; ++i) {
    if (i <= f.degree() && f.c[i] != 0) acc += f.c[i] * apow * bpow[deg - i];
    apow *= a;
  }
  return acc;
}

ZPoly derivative(const ZPoly& f) {
  ZPoly r;
  if (f.degree() < 1) return r;
  r.c.resize(f.degree());
  for (int i = 1; i <= f.degree(); ++i) r.c[i - 1] = mpz_class(i) * f.c[i];
  r.normalize();
  return r;
}

mpz_class content(const ZPoly& f) {
  mpz_class g = 0;
  for (auto& x : f.c) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

ZPoly primitive_part(const ZPoly& f) {
  if (f.is_zero()) return f;
  mpz_class g = content(f);
  if (f.lc() < 0) g = -g;
  ZPoly r = f;
  for (auto& x : r.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return r;
}

ZPoly z_from_q(const QPoly& f, mpz_class* den_out) {
  mpz_class den = 1;
  for (auto& x : f.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  ZPoly r;
  r.c.resize(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) {
    mpq_class scaled = f.c[i] * den;
    r.c[i] = scaled.get_num();
  }
  r.normalize();
  if (den_out) *den_out = den;
  return r;
}

QPoly q_from_z(const ZPoly& f) {
  QPoly r;
  r.c.assign(f.c.begin(), f.c.end());
  return r;
}

QPoly qdivrem(const QPoly& f, const QPoly& g, QPoly* rem) {
  if (g.is_zero()) throw ZeroPolynomial("division by zero polynomial");
  QPoly q, r = f;
  if (r.degree() >= g.degree()) {
    q.c.assign(r.degree() - g.degree() + 1, 0);
    while (!r.is_zero() && r.degree() >= g.degree()) {
      mpq_class t = r.lc() / g.lc();
      int k = r.degree() - g.degree();
      q.c[k] = t;
      for (int i = 0; i <= g.degree(); ++i) r.c[i + k] -= t * g.c[i];
      r.normalize();
    }
    q.normalize();
  }
  if (rem) *rem = r;
  return q;
}

std::optional<QPoly> divide_exact_q(const QPoly& f, const QPoly& g) {
  QPoly r;
  QPoly q = qdivrem(f, g, &r);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

std::optional<ZPoly> divide_exact(const ZPoly& f, const ZPoly& g) {
  if (g.is_zero()) throw ZeroPolynomial("division by zero polynomial");
  auto q = divide_exact_q(q_from_z(f), q_from_z(g));
  if (!q) return std::nullopt;
  for (auto& x : q->c)
    if (x.get_den() != 1) return std::nullopt;
  ZPoly r;
  r.c.resize(q->c.size());
  for (size_t i = 0; i < q->c.size(); ++i) r.c[i] = q->c[i].get_num();
  r.normalize();
  return r;
}

namespace {

// pseudo-remainder: lc(g)^(deg f - deg g + 1) * f = q*g + r; returns r with
// the multiplier applied exactly (degree drops of more than one are topped up
// at the end so the power of lc(g) is always deg f - deg g + 1)
ZPoly pseudo_rem(const ZPoly& f, const ZPoly& g) {
  ZPoly r = f;
  int dg = g.degree();
  int e = f.degree() - dg + 1;
  mpz_class glc = g.lc();
  while (!r.is_zero() && r.degree() >= dg) {
    int k = r.degree() - dg;
    mpz_class rlc = r.lc();
    for (auto& x : r.c) x *= glc; // r := glc*r - rlc*x^k*g
    for (int i = 0; i <= dg; ++i) r.c[i + k] -= rlc * g.c[i];
    r.normalize();
    --e;
  }
  if (e > 0 && !r.is_zero()) {
    mpz_class m;
    mpz_pow_ui(m.get_mpz_t(), glc.get_mpz_t(), e);
    for (auto& x : r.c) x *= m;
  }
  return r;
}

} // namespace

ZPoly gcd_z(const ZPoly& f, const ZPoly& g) {
  if (f.is_zero()) return g.is_zero() ? g : primitive_part(g);
  if (g.is_zero()) return primitive_part(f);
  ZPoly a = primitive_part(f), b = primitive_part(g);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    ZPoly r = pseudo_rem(a, b);
    a = b;
    b = r.is_zero() ? r : primitive_part(r);
  }
  return a;
}

QPoly q_extgcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t) {
  QPoly r0 = a, r1 = b;
  QPoly s0{mpq_class(1)}, s1, t0, t1{mpq_class(1)};
  while (!r1.is_zero()) {
    QPoly q, r2;
    q = qdivrem(r0, r1, &r2);
    r0 = r1;
    r1 = r2;
    QPoly s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    QPoly t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (!r0.is_zero() && r0.lc() != 1) {
    mpq_class inv = 1 / r0.lc();
    r0 = inv * r0;
    s0 = inv * s0;
    t0 = inv * t0;
  }
  s = s0;
  t = t0;
  return r0;
}

ZPoly squarefree_part(const ZPoly& f) {
  if (f.degree() <= 0) return primitive_part(f);
  ZPoly g = gcd_z(f, derivative(f));
  if (g.degree() == 0) return primitive_part(f);
  auto q = divide_exact(primitive_part(f), g);
  return primitive_part(*q);
}

std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f) {
  // Yun's algorithm on the primitive part
  std::vector<std::pair<ZPoly, int>> out;
  ZPoly p = primitive_part(f);
  if (p.degree() <= 0) return out;
  ZPoly d = derivative(p);
  ZPoly a = gcd_z(p, d);
  if (a.degree() == 0) {
    out.emplace_back(p, 1);
    return out;
  }
  ZPoly b = *divide_exact(p, a);
  ZPoly c = *divide_exact(d, a);
  int k = 1;
  for (;;) {
    ZPoly cmdb = c - derivative(b);
    if (cmdb.is_zero()) {
      if (b.degree() > 0) out.emplace_back(b, k);
      break;
    }
    ZPoly g = gcd_z(b, cmdb);
    if (g.degree() > 0) out.emplace_back(g, k);
    b = *divide_exact(b, g);
    c = *divide_exact(cmdb, g);
    ++k;
    if (b.degree() == 0) break;
  }
  return out;
}

mpz_class resultant(const ZPoly& f, const ZPoly& g) {
  // subresultant PRS (Cohen, Alg. 3.3.7)
  if (f.is_zero() || g.is_zero()) return 0;
  if (f.degree() == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), f.c[0].get_mpz_t(), g.degree());
    return r;
  }
  if (g.degree() == 0) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), g.c[0].get_mpz_t(), f.degree());
    return r;
  }
  ZPoly a = f, b = g;
  int s = 1;
  if (a.degree() < b.degree()) {
    if ((a.degree() % 2) && (b.degree() % 2)) s = -s;
    std::swap(a, b);
  }
  mpz_class gg = 1, h = 1;
  while (b.degree() > 0) {
    int d = a.degree() - b.degree();
    if ((a.degree() % 2) && (b.degree() % 2)) s = -s;
    ZPoly r = pseudo_rem(a, b);
    a = b;
    if (r.is_zero()) return 0; // positive-degree common factor
    mpz_class divisor = gg;
    for (int i = 0; i < d; ++i) divisor *= h;
    for (auto& x : r.c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), divisor.get_mpz_t());
    b = r;
    gg = a.lc();
    if (d == 1) {
      h = gg;
    } else if (d > 1) {
      mpz_class num;
      mpz_pow_ui(num.get_mpz_t(), gg.get_mpz_t(), d);
      mpz_class den;
      mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), d - 1);
      mpz_divexact(h.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    }
  }
  int d = a.degree();
  mpz_class num;
  mpz_pow_ui(num.get_mpz_t(), b.c[0].get_mpz_t(), d);
  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), h.get_mpz_t(), d >= 1 ? d - 1 : 0);
  mpz_class res;
  mpz_divexact(res.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return s * res;
}

mpz_class discriminant(const ZPoly& f) {
  if (f.degree() < 1) return 0;
  mpz_class r = resultant(f, derivative(f));
  mpz_class d;
  mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.lc().get_mpz_t());
  int n = f.degree();
  if (((n * (n - 1)) / 2) % 2) d = -d;
  return d;
}

ZPoly taylor_shift(const ZPoly& f, const mpz_class& a) {
  // synthetic division ladder: out[k] = coefficient of x^k in f(x + a)
  if (f.is_zero() || a == 0) return f;
  std::vector<mpz_class> w = f.c;
  int n = f.degree();
  ZPoly out;
  out.c.assign(n + 1, 0);
  for (int k = 0; k <= n; ++k) {
    for (int i = n - 1; i >= k; --i) w[i] += a * w[i + 1];
    out.c[k] = w[k];
  }
  out.normalize();
  return out;
}

QPoly taylor_shift(const QPoly& f, const mpq_class& a) {
  if (f.is_zero() || a == 0) return f;
  std::vector<mpq_class> w = f.c;
  int n = f.degree();
  QPoly out;
  out.c.assign(n + 1, 0);
  for (int k = 0; k <= n; ++k) {
    for (int i = n - 1; i >= k; --i) w[i] += a * w[i + 1];
    out.c[k] = w[k];
  }
  out.normalize();
  return out;
}

ZPoly reverse_poly(const ZPoly& f, int deg) {
  ZPoly r;
  r.c.assign(deg + 1, 0);
  for (int i = 0; i <= f.degree(); ++i) r.c[deg - i] = f.c[i];
  r.normalize();
  return r;
}

// ---- Sturm ----

SturmChain SturmChain::build(const ZPoly& f) {
  SturmChain ch;
  ch.seq.push_back(primitive_part(f));
  ZPoly d = derivative(f);
  if (d.is_zero()) return ch;
  ch.seq.push_back(primitive_part(d));
  while (ch.seq.back().degree() > 0) {
    const ZPoly& a = ch.seq[ch.seq.size() - 2];
    const ZPoly& b = ch.seq.back();
    int delta = a.degree() - b.degree();
    ZPoly r = pseudo_rem(a, b);
    if (r.is_zero()) break;
    // pseudo_rem scaled a by lc(b)^(delta+1); if that factor is negative the
    // sign of r is flipped relative to the true remainder and must be undone
    bool mult_negative = (b.lc() < 0) && ((delta + 1) % 2 == 1);
    int rsign = sgn(r.lc());
    ZPoly s = primitive_part(r);
    if (rsign < 0) s = -s; // primitive_part forced lc > 0; restore r's sign
    if (mult_negative) s = -s;
    ch.seq.push_back(-s);
  }
  return ch;
}

namespace {
int count_sign_changes(const std::vector<int>& signs) {
  int cnt = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++cnt;
    prev = s;
  }
  return cnt;
}
} // namespace

int SturmChain::sign_changes_at(const mpq_class& x) const {
  std::vector<int> signs;
  signs.reserve(seq.size());
  for (auto& p : seq) signs.push_back(sgn(eval_q(p, x)));
  return count_sign_changes(signs);
}

int SturmChain::count_roots(const mpq_class& a, const mpq_class& b) const {
  return sign_changes_at(a) - sign_changes_at(b);
}

int SturmChain::count_real_roots() const {
  std::vector<int> at_minf, at_inf;
  for (auto& p : seq) {
    int s = sgn(p.lc());
    at_inf.push_back(s);
    at_minf.push_back(p.degree() % 2 ? -s : s);
  }
  return count_sign_changes(at_minf) - count_sign_changes(at_inf);
}

mpq_class root_bound(const ZPoly& f) {
  // Cauchy: every root satisfies |z| < 1 + max |c_i| / |lc|
  mpq_class m = 0;
  for (int i = 0; i < f.degree(); ++i) {
    mpq_class v = abs(mpq_class(f.c[i]));
    if (v > m) m = v;
  }
  return 1 + m / abs(mpq_class(f.lc()));
}

std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const ZPoly& f) {
  std::vector<std::pair<mpq_class, mpq_class>> out;
  ZPoly sf = squarefree_part(f);
  if (sf.degree() < 1) return out;
  SturmChain ch = SturmChain::build(sf);
  mpq_class B = root_bound(sf);
  struct Item { mpq_class a, b; int count; };
  std::vector<Item> stack;
  {
    int total = ch.count_roots(-B, B);
    if (total > 0) stack.push_back({-B, B, total});
  }
  // invariant: interval endpoints are never roots (the Cauchy bound is strict
  // and every bisection point is sign-checked before use)
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    if (it.count == 1) {
      out.emplace_back(it.a, it.b);
      continue;
    }
    mpq_class m = (it.a + it.b) / 2;
    if (eval_q(sf, m) == 0) {
      // exact rational root at m: carve out a window holding only m
      mpq_class u = (it.b - it.a) / 4;
      while (ch.count_roots(m - u, m + u) > 1 || eval_q(sf, m - u) == 0 ||
             eval_q(sf, m + u) == 0)
        u /= 2;
      out.emplace_back(m - u, m + u);
      int left = ch.count_roots(it.a, m - u);
      if (left > 0) stack.push_back({it.a, m - u, left});
      int right = ch.count_roots(m + u, it.b);
      if (right > 0) stack.push_back({m + u, it.b, right});
      continue;
    }
    int left = ch.count_roots(it.a, m);
    if (left > 0) stack.push_back({it.a, m, left});
    if (it.count - left > 0) stack.push_back({m, it.b, it.count - left});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

std::pair<mpq_class, mpq_class> refine_real_root(const ZPoly& f,
                                                 std::pair<mpq_class, mpq_class> iv,
                                                 const mpq_class& width) {
  mpq_class fa = eval_q(f, iv.first);
  mpq_class fb = eval_q(f, iv.second);
  long steps = 0;
  if (fa != 0 && fb != 0 && sgn(fa) != sgn(fb)) {
    while (iv.second - iv.first > width) {
      if (++steps > 1000000) throw PrecisionExhausted("root bisection budget exceeded");
      mpq_class m = (iv.first + iv.second) / 2;
      mpq_class fm = eval_q(f, m);
      if (fm == 0) {
        mpq_class h = width / 4;
        return {m - h, m + h};
      }
      if (sgn(fm) == sgn(fa)) {
        iv.first = m;
        fa = fm;
      } else {
        iv.second = m;
      }
    }
    return iv;
  }
  // no sign change (e.g. a rational root in the interior): Sturm bisection
  SturmChain ch = SturmChain::build(squarefree_part(f));
  while (iv.second - iv.first > width) {
    if (++steps > 1000000) throw PrecisionExhausted("root bisection budget exceeded");
    mpq_class m = (iv.first + iv.second) / 2;
    if (ch.count_roots(iv.first, m) >= 1) iv.second = m;
    else iv.first = m;
  }
  return iv;
}

// ---- complex roots: Aberth approximation, interval-Newton certification ----

namespace {

// midpoint of a box edge as an exact point interval, clamped into [lo, hi]
Real midpoint_of(const Real& x, mpfr_prec_t prec) {
  mpfr_t m;
  mpfr_init2(m, prec);
  mpfr_add(m, x.lo(), x.hi(), MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  if (mpfr_cmp(m, x.lo()) < 0) mpfr_set(m, x.lo(), MPFR_RNDN);
  if (mpfr_cmp(m, x.hi()) > 0) mpfr_set(m, x.hi(), MPFR_RNDN);
  Real r = Real::from_endpoints(m, m);
  mpfr_clear(m);
  return r;
}

mpfr_prec_t prec_for_width(const mpq_class& width) {
  // bits needed to resolve `width` around magnitudes of order 1..2^64
  double bits = 64.0;
  if (width > 0) {
    size_t den_bits = mpz_sizeinbase(width.get_den_mpz_t(), 2);
    size_t num_bits = mpz_sizeinbase(width.get_num_mpz_t(), 2);
    bits += den_bits > num_bits ? static_cast<double>(den_bits - num_bits) : 0.0;
  }
  return static_cast<mpfr_prec_t>(std::min<double>(2 * bits + 96, kMaxPrecisionBits));
}

// One interval-Newton test on box B: if N(B) lands in the interior of B the
// box holds exactly one simple root and N(B) is a tighter enclosure of it.
std::optional<Complex> newton_certify(const ZPoly& f, const ZPoly& fd,
                                      const Complex& B, mpfr_prec_t prec) {
  Complex mid(midpoint_of(B.re, prec), midpoint_of(B.im, prec));
  Complex fmid = eval_interval(f, mid, prec);
  Complex fdB = eval_interval(fd, B, prec);
  if (abs_sq(fdB).contains_zero()) return std::nullopt;
  Complex N = mid - fmid / fdB;
  bool inside = mpfr_cmp(N.re.lo(), B.re.lo()) > 0 &&
                mpfr_cmp(N.re.hi(), B.re.hi()) < 0 &&
                mpfr_cmp(N.im.lo(), B.im.lo()) > 0 &&
                mpfr_cmp(N.im.hi(), B.im.hi()) < 0;
  if (!inside) return std::nullopt;
  return N;
}

Real intersect(const Real& a, const Real& b) {
  return Real::from_endpoints(mpfr_cmp(a.lo(), b.lo()) > 0 ? a.lo() : b.lo(),
                              mpfr_cmp(a.hi(), b.hi()) < 0 ? a.hi() : b.hi());
}

// contract a certified box below the requested width via Newton iteration
Complex newton_refine(const ZPoly& f, const ZPoly& fd, Complex B,
                      const mpq_class& width, mpfr_prec_t prec) {
  for (long guard = 0; B.re.width() > width || B.im.width() > width; ++guard) {
    if (guard > 400 || prec > kMaxPrecisionBits)
      throw PrecisionExhausted("complex Newton refinement stalled");
    mpq_class before = B.re.width() + B.im.width();
    Complex mid(midpoint_of(B.re, prec), midpoint_of(B.im, prec));
    Complex fmid = eval_interval(f, mid, prec);
    Complex fdB = eval_interval(fd, B, prec);
    Complex N = mid - fmid / fdB;
    B = Complex(intersect(N.re, B.re), intersect(N.im, B.im));
    if ((B.re.width() + B.im.width()) * 2 > before) prec *= 2; // stalled
  }
  return B;
}

} // namespace

std::vector<Complex> isolate_all_roots(const ZPoly& f, const mpq_class& width) {
  std::vector<Complex> out;
  int n = f.degree();
  if (n < 1) return out;

  auto real_ivs = isolate_real_roots(f);
  ZPoly fd = derivative(f);
  for (auto iv : real_ivs) {
    auto r = refine_real_root(f, iv, width);
    mpfr_t lo, hi;
    mpfr_init2(lo, 192);
    mpfr_init2(hi, 192);
    mpfr_set_q(lo, r.first.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi, r.second.get_mpq_t(), MPFR_RNDU);
    out.emplace_back(Real::from_endpoints(lo, hi), Real::from_long(0));
    mpfr_clear(lo);
    mpfr_clear(hi);
  }
  size_t n_real = real_ivs.size();
  size_t n_pairs = (static_cast<size_t>(n) - n_real) / 2;
  if (n_pairs == 0) return out;

  mpfr_prec_t refine_prec = prec_for_width(width);
  double R = root_bound(f).get_d();

  for (mpfr_prec_t prec = 256;; prec *= 2) {
    if (prec > kMaxPrecisionBits)
      throw PrecisionExhausted("complex root isolation failed to certify");

    // Aberth-Ehrlich on midpoint complex numbers (mpfr pairs)
    std::vector<mpfr_t> zr(n), zi(n);
    for (int k = 0; k < n; ++k) {
      mpfr_init2(zr[k], prec);
      mpfr_init2(zi[k], prec);
      double th = 2.0 * 3.14159265358979323846 * (k + 0.3543) / n;
      mpfr_set_d(zr[k], R * 0.7 * std::cos(th), MPFR_RNDN);
      mpfr_set_d(zi[k], R * 0.7 * std::sin(th) + 1e-3 * (k + 1), MPFR_RNDN);
    }
    mpfr_t fr, fi, dr, di, t1, t2, t3, t4, sr, si, den, tol, wabs;
    for (auto* p : {&fr, &fi, &dr, &di, &t1, &t2, &t3, &t4, &sr, &si, &den})
      mpfr_init2(*p, prec);
    mpfr_init2(tol, 64);
    mpfr_init2(wabs, 64);
    mpfr_set_ui(tol, 1, MPFR_RNDN);
    mpfr_div_2ui(tol, tol, prec / 2 + 4, MPFR_RNDN);

    auto cmul = [&](mpfr_t rr, mpfr_t ri, const mpfr_t ar, const mpfr_t ai,
                    const mpfr_t br, const mpfr_t bi) {
      mpfr_mul(t3, ar, br, MPFR_RNDN);
      mpfr_mul(t4, ai, bi, MPFR_RNDN);
      mpfr_sub(t3, t3, t4, MPFR_RNDN);
      mpfr_mul(t4, ar, bi, MPFR_RNDN);
      mpfr_mul(ri, ai, br, MPFR_RNDN);
      mpfr_add(ri, ri, t4, MPFR_RNDN);
      mpfr_set(rr, t3, MPFR_RNDN);
    };
    auto cdiv = [&](mpfr_t rr, mpfr_t ri, const mpfr_t ar, const mpfr_t ai,
                    const mpfr_t br, const mpfr_t bi) {
      mpfr_mul(t3, br, br, MPFR_RNDN);
      mpfr_mul(t4, bi, bi, MPFR_RNDN);
      mpfr_add(den, t3, t4, MPFR_RNDN);
      mpfr_mul(t3, ar, br, MPFR_RNDN);
      mpfr_mul(t4, ai, bi, MPFR_RNDN);
      mpfr_add(t3, t3, t4, MPFR_RNDN);
      mpfr_mul(t4, ai, br, MPFR_RNDN);
      mpfr_mul(ri, ar, bi, MPFR_RNDN);
      mpfr_sub(t4, t4, ri, MPFR_RNDN);
      mpfr_div(rr, t3, den, MPFR_RNDN);
      mpfr_div(ri, t4, den, MPFR_RNDN);
    };
    auto ceval = [&](mpfr_t vr, mpfr_t vi, const ZPoly& p, const mpfr_t xr,
                     const mpfr_t xi) {
      mpfr_set_zero(vr, 1);
      mpfr_set_zero(vi, 1);
      for (int i = p.degree(); i >= 0; --i) {
        cmul(vr, vi, vr, vi, xr, xi);
        mpfr_set_z(t1, p.c[i].get_mpz_t(), MPFR_RNDN);
        mpfr_add(vr, vr, t1, MPFR_RNDN);
      }
    };

    for (int iter = 0, converged = 0; iter < 600 && !converged; ++iter) {
      converged = 1;
      for (int k = 0; k < n; ++k) {
        ceval(fr, fi, f, zr[k], zi[k]);
        ceval(dr, di, fd, zr[k], zi[k]);
        if (mpfr_zero_p(dr) && mpfr_zero_p(di)) continue;
        cdiv(fr, fi, fr, fi, dr, di); // fr+fi*i := Newton correction
        mpfr_set_zero(sr, 1);
        mpfr_set_zero(si, 1);
        for (int j = 0; j < n; ++j) {
          if (j == k) continue;
          mpfr_sub(t1, zr[k], zr[j], MPFR_RNDN);
          mpfr_sub(t2, zi[k], zi[j], MPFR_RNDN);
          mpfr_mul(t3, t1, t1, MPFR_RNDN);
          mpfr_mul(t4, t2, t2, MPFR_RNDN);
          mpfr_add(den, t3, t4, MPFR_RNDN);
          if (mpfr_zero_p(den)) continue;
          mpfr_div(t1, t1, den, MPFR_RNDN); // 1/(zk-zj) = conj/|.|^2
          mpfr_div(t2, t2, den, MPFR_RNDN);
          mpfr_add(sr, sr, t1, MPFR_RNDN);
          mpfr_sub(si, si, t2, MPFR_RNDN);
        }
        cmul(t1, t2, fr, fi, sr, si);
        mpfr_ui_sub(t1, 1, t1, MPFR_RNDN);
        mpfr_neg(t2, t2, MPFR_RNDN);
        cdiv(dr, di, fr, fi, t1, t2); // Aberth step dr+di*i
        mpfr_sub(zr[k], zr[k], dr, MPFR_RNDN);
        mpfr_sub(zi[k], zi[k], di, MPFR_RNDN);
        mpfr_hypot(wabs, dr, di, MPFR_RNDN);
        if (mpfr_cmp(wabs, tol) > 0) converged = 0;
      }
    }

    // certify every upper-half-plane approximation
    std::vector<Complex> uniq;
    for (int k = 0; k < n; ++k) {
      double im = mpfr_get_d(zi[k], MPFR_RNDN);
      if (im <= 1e-12 * (1 + R)) continue;
      double re = mpfr_get_d(zr[k], MPFR_RNDN);
      double scale = 1.0 + std::abs(re) + im;
      std::optional<Complex> got;
      for (double rad = scale * std::pow(2.0, -60); rad < 0.1 * scale; rad *= 1024) {
        Complex B(Real::whole(re - rad, re + rad), Real::whole(im - rad, im + rad));
        got = newton_certify(f, fd, B, std::max<mpfr_prec_t>(prec, 192));
        if (got) break;
      }
      if (!got) continue;
      bool dup = false;
      for (auto& u : uniq)
        if (!disjoint(*got, u)) {
          dup = true;
          break;
        }
      if (!dup) uniq.push_back(*got);
    }

    for (int k = 0; k < n; ++k) {
      mpfr_clear(zr[k]);
      mpfr_clear(zi[k]);
    }
    for (auto* p : {&fr, &fi, &dr, &di, &t1, &t2, &t3, &t4, &sr, &si, &den, &tol, &wabs})
      mpfr_clear(*p);

    if (uniq.size() != n_pairs) continue; // escalate precision and retry

    std::vector<Complex> block;
    for (auto& u : uniq) {
      Complex ref = newton_refine(f, fd, u, width, refine_prec);
      block.emplace_back(ref.re, -ref.im); // conjugate, lower half-plane
      block.push_back(ref);
    }
    std::sort(block.begin(), block.end(), [](const Complex& a, const Complex& b) {
      if (!a.re.overlaps(b.re)) return mpfr_cmp(a.re.hi(), b.re.lo()) < 0;
      return mpfr_cmp(a.im.hi(), b.im.lo()) < 0;
    });
    for (auto& c : block) out.push_back(c);
    return out;
  }
}

} // namespace tsd
