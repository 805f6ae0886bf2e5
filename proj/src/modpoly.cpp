#include "tsd/modpoly.hpp"

#include <algorithm>

namespace tsd {

namespace {

inline unsigned long addm(unsigned long a, unsigned long b, unsigned long p) {
  unsigned long s = a + b;
  return s >= p ? s - p : s;
}
inline unsigned long subm(unsigned long a, unsigned long b, unsigned long p) {
  return a >= b ? a - b : a + p - b;
}
inline unsigned long mulm(unsigned long a, unsigned long b, unsigned long p) {
  return (a * static_cast<unsigned __int128>(b)) % p;
}

} // namespace

unsigned long fp_inv(unsigned long a, unsigned long p) {
  // extended euclid over signed 64-bit; p < 2^31 keeps everything in range
  long t = 0, newt = 1;
  long r = static_cast<long>(p), newr = static_cast<long>(a % p);
  while (newr != 0) {
    long q = r / newr;
    long tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw DivisionByZero("fp_inv of non-unit");
  if (t < 0) t += static_cast<long>(p);
  return static_cast<unsigned long>(t);
}

FpPoly fp_from_z(const ZPoly& f, unsigned long p) {
  FpPoly r;
  r.p = p;
  r.c.resize(f.c.size());
  mpz_class m;
  for (size_t i = 0; i < f.c.size(); ++i) {
    mpz_mod_ui(m.get_mpz_t(), f.c[i].get_mpz_t(), p);
    r.c[i] = m.get_ui();
  }
  r.normalize();
  return r;
}

ZPoly z_from_fp_symmetric(const FpPoly& f) {
  ZPoly r;
  r.c.resize(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) {
    unsigned long v = f.c[i];
    if (v > f.p / 2) r.c[i] = -static_cast<long>(f.p - v);
    else r.c[i] = static_cast<long>(v);
  }
  r.normalize();
  return r;
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
  FpPoly r;
  r.p = a.p;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = addm(r.c[i], b.c[i], r.p);
  r.normalize();
  return r;
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
  FpPoly r;
  r.p = a.p ? a.p : b.p;
  r.c.assign(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = subm(r.c[i], b.c[i], r.p);
  r.normalize();
  return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
  FpPoly r;
  r.p = a.p ? a.p : b.p;
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = addm(r.c[i + j], mulm(a.c[i], b.c[j], r.p), r.p);
  }
  r.normalize();
  return r;
}

FpPoly fp_scalar(const FpPoly& a, unsigned long s) {
  FpPoly r = a;
  s %= r.p;
  for (auto& x : r.c) x = mulm(x, s, r.p);
  r.normalize();
  return r;
}

FpPoly fp_monic(const FpPoly& a) {
  if (a.is_zero() || a.lc() == 1) return a;
  return fp_scalar(a, fp_inv(a.lc(), a.p));
}

FpPoly fp_divrem(const FpPoly& a, const FpPoly& b, FpPoly* quot) {
  if (b.is_zero()) throw DivisionByZero("fp division by zero polynomial");
  FpPoly r = a, q;
  q.p = a.p ? a.p : b.p;
  r.p = q.p;
  unsigned long binv = fp_inv(b.lc(), q.p);
  if (r.degree() >= b.degree()) q.c.assign(r.degree() - b.degree() + 1, 0);
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int k = r.degree() - b.degree();
    unsigned long t = mulm(r.lc(), binv, q.p);
    q.c[k] = t;
    for (int i = 0; i <= b.degree(); ++i)
      r.c[i + k] = subm(r.c[i + k], mulm(t, b.c[i], q.p), q.p);
    r.normalize();
  }
  q.normalize();
  if (quot) *quot = q;
  return r;
}

FpPoly fp_gcd(const FpPoly& a, const FpPoly& b) {
  FpPoly x = a, y = b;
  while (!y.is_zero()) {
    FpPoly r = fp_divrem(x, y);
    x = y;
    y = r;
  }
  return x.is_zero() ? x : fp_monic(x);
}

FpPoly fp_extgcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t) {
  unsigned long p = a.p ? a.p : b.p;
  FpPoly r0 = a, r1 = b;
  FpPoly s0, s1, t0, t1;
  s0.p = s1.p = t0.p = t1.p = p;
  s0.c = {1};
  t1.c = {1};
  while (!r1.is_zero()) {
    FpPoly q;
    FpPoly r2 = fp_divrem(r0, r1, &q);
    r0 = r1;
    r1 = r2;
    FpPoly s2 = fp_sub(s0, fp_mul(q, s1));
    s0 = s1;
    s1 = s2;
    FpPoly t2 = fp_sub(t0, fp_mul(q, t1));
    t0 = t1;
    t1 = t2;
  }
  if (!r0.is_zero() && r0.lc() != 1) {
    unsigned long inv = fp_inv(r0.lc(), p);
    r0 = fp_scalar(r0, inv);
    s0 = fp_scalar(s0, inv);
    t0 = fp_scalar(t0, inv);
  }
  s = s0;
  t = t0;
  return r0;
}

FpPoly fp_powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod) {
  FpPoly result;
  result.p = mod.p;
  result.c = {1};
  FpPoly b = fp_divrem(base, mod);
  size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (e == 0) return result;
  for (size_t i = bits; i-- > 0;) {
    result = fp_divrem(fp_mul(result, result), mod);
    if (mpz_tstbit(e.get_mpz_t(), i))
      result = fp_divrem(fp_mul(result, b), mod);
  }
  return result;
}

FpPoly fp_derivative(const FpPoly& f) {
  FpPoly r;
  r.p = f.p;
  if (f.degree() < 1) return r;
  r.c.resize(f.degree());
  for (int i = 1; i <= f.degree(); ++i) r.c[i - 1] = mulm(f.c[i], i % f.p, f.p);
  r.normalize();
  return r;
}

bool fp_squarefree(const FpPoly& f) {
  FpPoly d = fp_derivative(f);
  if (d.is_zero()) return f.degree() == 0;
  return fp_gcd(f, d).degree() == 0;
}

namespace {

// equal-degree splitting (Cantor-Zassenhaus, p odd): f monic squarefree, all
// irreducible factors of degree d
void edf(const FpPoly& f, int d, Rng& rng, std::vector<FpPoly>& out) {
  if (f.degree() == d) {
    out.push_back(f);
    return;
  }
  unsigned long p = f.p;
  mpz_class pd;
  mpz_ui_pow_ui(pd.get_mpz_t(), p, d);
  mpz_class e = (pd - 1) / 2;
  for (;;) {
    FpPoly a;
    a.p = p;
    a.c.resize(f.degree());
    for (auto& x : a.c) x = rng.u64() % p;
    a.normalize();
    if (a.degree() < 1) continue;
    FpPoly g = fp_gcd(a, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      FpPoly q;
      fp_divrem(f, g, &q);
      edf(g, d, rng, out);
      edf(fp_monic(q), d, rng, out);
      return;
    }
    FpPoly b = fp_powmod(a, e, f);
    if (b.is_zero()) continue;
    b.c[0] = subm(b.c[0], 1 % p, p);
    b.normalize();
    if (b.is_zero()) continue;
    g = fp_gcd(b, f);
    if (g.degree() > 0 && g.degree() < f.degree()) {
      FpPoly q;
      fp_divrem(f, g, &q);
      edf(g, d, rng, out);
      edf(fp_monic(q), d, rng, out);
      return;
    }
  }
}

} // namespace

std::vector<FpPoly> fp_factor_squarefree(const FpPoly& f0, Rng& rng) {
  std::vector<FpPoly> out;
  FpPoly f = fp_monic(f0);
  unsigned long p = f.p;
  // distinct-degree: strip all degree-d factors for d = 1, 2, ...
  FpPoly x;
  x.p = p;
  x.c = {0, 1};
  FpPoly h = x;
  for (int d = 1; f.degree() >= 2 * d; ++d) {
    h = fp_powmod(h, mpz_class(static_cast<long>(p)), f);
    FpPoly g = fp_gcd(fp_sub(h, x), f);
    if (g.degree() > 0) {
      edf(g, d, rng, out);
      FpPoly q;
      fp_divrem(f, g, &q);
      f = fp_monic(q);
      h = fp_divrem(h, f);
    }
  }
  if (f.degree() > 0) out.push_back(f);
  std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a.c < b.c;
  });
  return out;
}

} // namespace tsd
