#include "tsd/factor.hpp"

#include <algorithm>
#include <map>

#include "tsd/modpoly.hpp"

namespace tsd {

namespace {

// ---- arithmetic on Z/m[x] for an mpz modulus (coefficients in [0, m)) ----

ZPoly zm_reduce(const ZPoly& f, const mpz_class& m) {
  ZPoly r = f;
  for (auto& x : r.c) {
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  }
  r.normalize();
  return r;
}

ZPoly zm_mul(const ZPoly& a, const ZPoly& b, const mpz_class& m) {
  return zm_reduce(a * b, m);
}

// division by a monic divisor, everything mod m
void zm_divrem_monic(const ZPoly& a, const ZPoly& h, const mpz_class& m,
                     ZPoly& q, ZPoly& r) {
  r = zm_reduce(a, m);
  q = ZPoly{};
  if (r.degree() >= h.degree()) q.c.assign(r.degree() - h.degree() + 1, 0);
  while (!r.is_zero() && r.degree() >= h.degree()) {
    int k = r.degree() - h.degree();
    mpz_class t = r.lc();
    q.c[k] = t;
    for (int i = 0; i <= h.degree(); ++i) {
      mpz_class v = r.c[i + k] - t * h.c[i];
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
      r.c[i + k] = v;
    }
    r.normalize();
  }
  q.normalize();
}

ZPoly zm_symmetric(const ZPoly& f, const mpz_class& m) {
  ZPoly r = zm_reduce(f, m);
  mpz_class half = m / 2;
  for (auto& x : r.c)
    if (x > half) x -= m;
  r.normalize();
  return r;
}

// one quadratic Hensel step: given f = g*h (mod m), s*g + t*h = 1 (mod m),
// h monic, lifts all four to the same identities mod m^2
void hensel_step(const ZPoly& f, ZPoly& g, ZPoly& h, ZPoly& s, ZPoly& t,
                 const mpz_class& m) {
  mpz_class m2 = m * m;
  ZPoly e = zm_reduce(f - zm_mul(g, h, m2), m2);
  ZPoly q, r;
  zm_divrem_monic(zm_mul(s, e, m2), h, m2, q, r);
  ZPoly g1 = zm_reduce(g + zm_mul(t, e, m2) + zm_mul(q, g, m2), m2);
  ZPoly h1 = zm_reduce(h + r, m2);
  ZPoly b = zm_reduce(zm_mul(s, g1, m2) + zm_mul(t, h1, m2) - ZPoly{mpz_class(1)}, m2);
  ZPoly cq, dr;
  zm_divrem_monic(zm_mul(s, b, m2), h1, m2, cq, dr);
  ZPoly s1 = zm_reduce(s - dr, m2);
  ZPoly t1 = zm_reduce(t - zm_mul(t, b, m2) - zm_mul(cq, g1, m2), m2);
  g = g1;
  h = h1;
  s = s1;
  t = t1;
}

// lift a list of pairwise coprime monic factors of monic F from mod p to the
// modulus of F (p^(2^K)); recursive split keeps every hensel_step binary
std::vector<ZPoly> hensel_lift_list(const ZPoly& F, const std::vector<FpPoly>& facs,
                                    unsigned long p, int K, const mpz_class& M) {
  if (facs.size() == 1) return {zm_reduce(F, M)};
  size_t half = facs.size() / 2;
  FpPoly L{p, {1}}, R{p, {1}};
  for (size_t i = 0; i < half; ++i) L = fp_mul(L, facs[i]);
  for (size_t i = half; i < facs.size(); ++i) R = fp_mul(R, facs[i]);
  FpPoly sB, tB;
  fp_extgcd(L, R, sB, tB);
  ZPoly g = z_from_fp_symmetric(L), h = z_from_fp_symmetric(R);
  ZPoly s = z_from_fp_symmetric(sB), t = z_from_fp_symmetric(tB);
  mpz_class m = static_cast<long>(p);
  g = zm_reduce(g, m);
  h = zm_reduce(h, m);
  s = zm_reduce(s, m);
  t = zm_reduce(t, m);
  for (int j = 0; j < K; ++j) {
    hensel_step(F, g, h, s, t, m);
    m = m * m;
  }
  std::vector<FpPoly> left(facs.begin(), facs.begin() + half);
  std::vector<FpPoly> right(facs.begin() + half, facs.end());
  auto out = hensel_lift_list(g, left, p, K, M);
  auto rhs = hensel_lift_list(h, right, p, K, M);
  out.insert(out.end(), rhs.begin(), rhs.end());
  return out;
}

mpz_class two_norm_ceil(const ZPoly& f) {
  mpz_class s = 0;
  for (auto& x : f.c) s += x * x;
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
  return r + 1;
}

bool next_combination(std::vector<size_t>& idx, size_t n) {
  size_t k = idx.size();
  for (size_t i = k; i-- > 0;) {
    if (idx[i] < n - (k - i)) {
      ++idx[i];
      for (size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

bool zpoly_less(const ZPoly& a, const ZPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

} // namespace

std::vector<ZPoly> factor_squarefree_z(const ZPoly& f0, Rng& rng) {
  ZPoly f = primitive_part(f0);
  if (f.degree() < 1) return {};
  if (f.degree() == 1) return {f};

  // pick the usable small prime with the fewest modular factors
  unsigned long best_p = 0;
  std::vector<FpPoly> best_facs;
  int tried = 0;
  for (unsigned long p = 3; tried < 12; p += 2) {
    if (!is_probable_prime(p)) continue;
    if (mpz_divisible_ui_p(f.lc().get_mpz_t(), p)) continue;
    FpPoly fp = fp_from_z(f, p);
    if (fp.degree() != f.degree() || !fp_squarefree(fp)) continue;
    ++tried;
    auto facs = fp_factor_squarefree(fp_monic(fp), rng);
    if (best_p == 0 || facs.size() < best_facs.size()) {
      best_p = p;
      best_facs = std::move(facs);
      if (best_facs.size() == 1) break;
    }
  }
  if (best_p == 0) throw PrecisionExhausted("no usable prime for factorization");
  if (best_facs.size() == 1) return {f};

  unsigned long p = best_p;
  // Landau-Mignotte: coefficients of lc * (any monic-normalized factor) are
  // bounded by 2^n * |f|_2 * |lc|
  mpz_class B = two_norm_ceil(f) * abs(f.lc());
  mpz_class pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), 2, f.degree() + 1);
  B *= pw;
  int K = 0;
  mpz_class M = static_cast<long>(p);
  while (M < 2 * B + 1) {
    M = M * M;
    ++K;
  }
  // monic image of f mod M
  mpz_class lcinv;
  mpz_class lcm_ = f.lc();
  mpz_mod(lcm_.get_mpz_t(), lcm_.get_mpz_t(), M.get_mpz_t());
  if (mpz_invert(lcinv.get_mpz_t(), lcm_.get_mpz_t(), M.get_mpz_t()) == 0)
    throw DivisionByZero("leading coefficient not invertible modulo p^k");
  ZPoly Fm = f;
  for (auto& x : Fm.c) {
    x *= lcinv;
    mpz_mod(x.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t());
  }

  std::vector<ZPoly> lifted = hensel_lift_list(Fm, best_facs, p, K, M);

  // subset recombination against the remaining cofactor
  std::vector<ZPoly> out;
  std::vector<size_t> live(lifted.size());
  for (size_t i = 0; i < live.size(); ++i) live[i] = i;
  ZPoly rem = f;
  size_t s = 1;
  while (2 * s <= live.size()) {
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    bool found = false;
    do {
      ZPoly cand{rem.lc()};
      for (size_t i : idx) cand = zm_mul(cand, lifted[live[i]], M);
      cand = primitive_part(zm_symmetric(cand, M));
      if (cand.degree() < 1) continue;
      auto quot = divide_exact(rem, cand);
      if (!quot) continue;
      out.push_back(cand);
      rem = primitive_part(*quot);
      std::vector<size_t> nl;
      for (size_t i = 0; i < live.size(); ++i)
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) nl.push_back(live[i]);
      live = nl;
      found = true;
      break;
    } while (next_combination(idx, live.size()));
    if (!found) ++s;
  }
  if (rem.degree() >= 1) out.push_back(rem);
  std::sort(out.begin(), out.end(), zpoly_less);
  return out;
}

ZFactorization factor_z(const ZPoly& f, Rng& rng) {
  if (f.is_zero()) throw ZeroPolynomial("factoring the zero polynomial");
  ZFactorization out;
  mpz_class cont = content(f);
  if (f.lc() < 0) cont = -cont;
  out.unit = mpq_class(cont);
  if (f.degree() < 1) return out;
  ZPoly pp = primitive_part(f);
  for (auto& [part, mult] : squarefree_decomposition(pp))
    for (auto& irr : factor_squarefree_z(part, rng))
      out.factors.emplace_back(irr, mult);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return zpoly_less(a.first, b.first); });
  return out;
}

bool is_irreducible_z(const ZPoly& f, Rng& rng) {
  ZPoly pp = primitive_part(f);
  if (pp.degree() < 1) return false;
  if (gcd_z(pp, derivative(pp)).degree() != 0) return false;
  return factor_squarefree_z(pp, rng).size() == 1;
}

// ---- bivariate ----

namespace {

void bi_sign_normalize(BiPoly& f) {
  // make the lexicographically leading (i, j) coefficient positive
  for (int i = f.degx(); i >= 0; --i)
    for (int j = f.degy(); j >= 0; --j)
      if (f.c[i][j] != 0) {
        if (f.c[i][j] < 0) f = -f;
        return;
      }
}

BiPoly bi_primitive(const BiPoly& f) {
  if (f.is_zero()) return f;
  BiPoly r = f;
  ZPoly cx = content_in_x(r);
  if (cx.degree() >= 1 || cx.lc() != 1) r = *bi_divide_exact(r, BiPoly::from_x(cx));
  ZPoly cy = content_in_y(r);
  if (cy.degree() >= 1 || cy.lc() != 1) r = *bi_divide_exact(r, BiPoly::from_y(cy));
  mpz_class ic = integer_content(r);
  if (ic != 1) {
    BiPoly q;
    q.c = r.c;
    for (auto& row : q.c)
      for (auto& v : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), ic.get_mpz_t());
    r = q;
  }
  bi_sign_normalize(r);
  return r;
}

BiPoly bi_gcd(const BiPoly& A, const BiPoly& B) {
  if (A.is_zero()) return bi_primitive(B);
  if (B.is_zero()) return bi_primitive(A);
  ZPoly ca = content_in_x(A), cb = content_in_x(B);
  BiPoly a = *bi_divide_exact(A, BiPoly::from_x(ca));
  BiPoly b = *bi_divide_exact(B, BiPoly::from_x(cb));
  ZPoly cg = gcd_z(ca, cb);
  if (a.degy() < b.degy()) std::swap(a, b);
  while (!b.is_zero() && b.degy() >= 0) {
    if (b.degy() == 0) {
      // b is a polynomial in x only; the y-primitive parts are coprime in y
      a = BiPoly::constant(1);
      break;
    }
    BiPoly r = pseudo_rem_y(a, b);
    a = b;
    if (r.is_zero()) break;
    ZPoly cr = content_in_x(r);
    b = *bi_divide_exact(r, BiPoly::from_x(cr));
    mpz_class ic = integer_content(b);
    if (ic != 1 && ic != 0)
      for (auto& row : b.c)
        for (auto& v : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), ic.get_mpz_t());
  }
  BiPoly g = bi_primitive(a);
  BiPoly r = BiPoly::from_x(cg) * g;
  bi_sign_normalize(r);
  return r;
}

// ---- lifting over Q[t]/(t^k) ----

QPoly ts_trunc(const QPoly& a, int k) {
  QPoly r = a;
  if (static_cast<int>(r.c.size()) > k) r.c.resize(k);
  r.normalize();
  return r;
}

QPoly ts_mul(const QPoly& a, const QPoly& b, int k) { return ts_trunc(a * b, k); }

QPoly ts_inv(const QPoly& a, int k) {
  if (a.is_zero() || a.c[0] == 0) throw DivisionByZero("series with zero constant term");
  QPoly r;
  r.c.assign(k, 0);
  r.c[0] = 1 / a.c[0];
  for (int n = 1; n < k; ++n) {
    mpq_class s = 0;
    for (int i = 1; i <= n && i < static_cast<int>(a.c.size()); ++i)
      s += a.c[i] * r.c[n - i];
    r.c[n] = -s / a.c[0];
  }
  r.normalize();
  return r;
}

// polynomials in x over Q[t]/(t^k)
struct XPoly {
  std::vector<QPoly> c; // c[i] multiplies x^i
  void normalize() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

XPoly xp_trunc(const XPoly& a, int k) {
  XPoly r = a;
  for (auto& s : r.c) s = ts_trunc(s, k);
  r.normalize();
  return r;
}

XPoly xp_add(const XPoly& a, const XPoly& b, int k) {
  XPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = r.c[i] + a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] + b.c[i];
  return xp_trunc(r, k);
}

XPoly xp_sub(const XPoly& a, const XPoly& b, int k) {
  XPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = r.c[i] + a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = r.c[i] - b.c[i];
  return xp_trunc(r, k);
}

XPoly xp_mul(const XPoly& a, const XPoly& b, int k) {
  XPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, QPoly{});
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = r.c[i + j] + ts_mul(a.c[i], b.c[j], k);
  }
  r.normalize();
  return r;
}

// divide by h whose leading x-coefficient is an invertible series
void xp_divrem(const XPoly& a, const XPoly& h, int k, XPoly& q, XPoly& r) {
  r = xp_trunc(a, k);
  q = XPoly{};
  QPoly hinv = ts_inv(h.c.back(), k);
  if (r.degree() >= h.degree()) q.c.assign(r.degree() - h.degree() + 1, QPoly{});
  while (!r.is_zero() && r.degree() >= h.degree()) {
    int pos = r.degree() - h.degree();
    QPoly t = ts_mul(r.c.back(), hinv, k);
    q.c[pos] = t;
    for (int i = 0; i <= h.degree(); ++i)
      r.c[i + pos] = ts_trunc(r.c[i + pos] - ts_mul(t, h.c[i], k), k);
    r.normalize();
  }
  q.normalize();
}

void hensel_step_t(const XPoly& f, XPoly& g, XPoly& h, XPoly& s, XPoly& t, int k) {
  XPoly e = xp_sub(f, xp_mul(g, h, k), k);
  XPoly q, r;
  xp_divrem(xp_mul(s, e, k), h, k, q, r);
  XPoly g1 = xp_add(g, xp_add(xp_mul(t, e, k), xp_mul(q, g, k), k), k);
  XPoly h1 = xp_add(h, r, k);
  XPoly one;
  one.c = {QPoly{mpq_class(1)}};
  XPoly b = xp_sub(xp_add(xp_mul(s, g1, k), xp_mul(t, h1, k), k), one, k);
  XPoly cq, dr;
  xp_divrem(xp_mul(s, b, k), h1, k, cq, dr);
  XPoly s1 = xp_sub(s, dr, k);
  XPoly t1 = xp_sub(t, xp_add(xp_mul(t, b, k), xp_mul(cq, g1, k), k), k);
  g = g1;
  h = h1;
  s = s1;
  t = t1;
}

XPoly xp_from_qpoly(const QPoly& f) {
  XPoly r;
  r.c.resize(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = QPoly{f.c[i]};
  r.normalize();
  return r;
}

std::vector<XPoly> lift_list_t(const XPoly& F, const std::vector<QPoly>& facs, int k) {
  if (facs.size() == 1) return {xp_trunc(F, k)};
  size_t half = facs.size() / 2;
  QPoly L{mpq_class(1)}, R{mpq_class(1)};
  for (size_t i = 0; i < half; ++i) L = L * facs[i];
  for (size_t i = half; i < facs.size(); ++i) R = R * facs[i];
  QPoly sB, tB;
  q_extgcd(L, R, sB, tB);
  XPoly g = xp_from_qpoly(L), h = xp_from_qpoly(R);
  XPoly s = xp_from_qpoly(sB), t = xp_from_qpoly(tB);
  for (int l = 1; l < k;) {
    l = std::min(2 * l, k);
    hensel_step_t(F, g, h, s, t, l);
  }
  std::vector<QPoly> left(facs.begin(), facs.begin() + half);
  std::vector<QPoly> right(facs.begin() + half, facs.end());
  auto out = lift_list_t(g, left, k);
  auto rhs = lift_list_t(h, right, k);
  out.insert(out.end(), rhs.begin(), rhs.end());
  return out;
}

bool bipoly_less(const BiPoly& a, const BiPoly& b) {
  if (a.degx() != b.degx()) return a.degx() < b.degx();
  if (a.degy() != b.degy()) return a.degy() < b.degy();
  for (int i = a.degx(); i >= 0; --i)
    for (int j = a.degy(); j >= 0; --j)
      if (a.c[i][j] != b.c[i][j]) return a.c[i][j] < b.c[i][j];
  return false;
}

// convert a lifted candidate (poly in x over Q[t]/(t^k), t = y - y0) back to
// a primitive integral bivariate polynomial
BiPoly xp_to_bipoly(const XPoly& a, const mpq_class& y0) {
  std::vector<QPoly> shifted(a.c.size());
  for (size_t i = 0; i < a.c.size(); ++i)
    shifted[i] = taylor_shift(a.c[i], -y0); // t -> y - y0
  // clear denominators over the whole grid
  mpz_class den = 1;
  for (auto& s : shifted)
    for (auto& v : s.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  BiPoly r;
  for (size_t i = 0; i < shifted.size(); ++i)
    for (int j = 0; j <= shifted[i].degree(); ++j) {
      mpq_class v = shifted[i].c[j] * den;
      if (v != 0) r.set_coeff(static_cast<int>(i), j, v.get_num());
    }
  r.normalize();
  return bi_primitive(r);
}

// irreducible factors of a primitive squarefree polynomial with positive
// degree in both variables
std::vector<BiPoly> bi_factor_squarefree(const BiPoly& f, Rng& rng) {
  if (f.degx() == 1 || f.degy() == 1) return {f}; // linear in a variable, no content
  // specialize y at a point keeping degree and squarefreeness
  auto lcx = x_coefficients(f).back(); // in Z[y]
  long y0 = 0;
  ZPoly u;
  for (long trial = 0;; ++trial) {
    y0 = trial % 2 ? (trial + 1) / 2 : -(trial + 1) / 2; // 0, 1, -1, 2, -2, ...
    if (eval_z(lcx, y0) == 0) continue;
    u = eval_at_y(f, mpz_class(y0));
    if (gcd_z(u, derivative(u)).degree() == 0) break;
    if (trial > 200) throw PrecisionExhausted("no good specialization point");
  }
  std::vector<ZPoly> uf = factor_squarefree_z(primitive_part(u), rng);
  if (uf.size() == 1) return {f};

  int k = f.degy() + 1;
  // F(x, y0 + t), monic in x over Q[t]/(t^k)
  auto xc = x_coefficients(f);
  XPoly F;
  F.c.resize(xc.size());
  for (size_t i = 0; i < xc.size(); ++i)
    F.c[i] = ts_trunc(taylor_shift(q_from_z(xc[i]), mpq_class(y0)), k);
  QPoly lcF = F.c.back();
  QPoly lcinv = ts_inv(lcF, k);
  XPoly Fm = F;
  for (auto& s : Fm.c) s = ts_mul(s, lcinv, k);

  std::vector<QPoly> start(uf.size());
  for (size_t i = 0; i < uf.size(); ++i) {
    QPoly m = q_from_z(uf[i]);
    start[i] = mpq_class(1 / m.lc()) * m;
  }
  std::vector<XPoly> lifted = lift_list_t(Fm, start, k);

  // subset recombination
  std::vector<BiPoly> out;
  std::vector<size_t> live(lifted.size());
  for (size_t i = 0; i < live.size(); ++i) live[i] = i;
  BiPoly rem = f;
  size_t s = 1;
  while (2 * s <= live.size()) {
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    bool found = false;
    do {
      XPoly cand;
      cand.c = {lcF}; // scalar: the full leading-coefficient series
      for (size_t i : idx) cand = xp_mul(cand, lifted[live[i]], k);
      BiPoly cb = xp_to_bipoly(cand, mpq_class(y0));
      if (cb.degx() < 1) continue;
      auto quot = bi_divide_exact(rem, cb);
      if (!quot) continue;
      out.push_back(cb);
      rem = bi_primitive(*quot);
      std::vector<size_t> nl;
      for (size_t i = 0; i < live.size(); ++i)
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) nl.push_back(live[i]);
      live = nl;
      found = true;
      break;
    } while (next_combination(idx, live.size()));
    if (!found) ++s;
  }
  if (rem.degx() >= 1 || rem.degy() >= 1) out.push_back(rem);
  std::sort(out.begin(), out.end(), bipoly_less);
  return out;
}

} // namespace

BiFactorization factor_bi(const BiPoly& f0, Rng& rng) {
  if (f0.is_zero()) throw ZeroPolynomial("factoring the zero bivariate polynomial");
  BiFactorization out;
  BiPoly f = f0;
  mpz_class ic = integer_content(f);
  {
    // sign from the lex-leading term
    mpz_class lead = 0;
    for (int i = f.degx(); i >= 0 && lead == 0; --i)
      for (int j = f.degy(); j >= 0; --j)
        if (f.c[i][j] != 0) {
          lead = f.c[i][j];
          break;
        }
    if (lead < 0) ic = -ic;
  }
  out.unit = mpq_class(ic);
  if (ic != 1) {
    for (auto& row : f.c)
      for (auto& v : row) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), ic.get_mpz_t());
  }
  if (f.degx() <= 0 && f.degy() <= 0) return out;

  // split off factors depending on one variable only
  ZPoly cx = content_in_x(f);
  if (cx.degree() >= 1) {
    auto zf = factor_z(cx, rng);
    out.unit *= zf.unit;
    for (auto& [p, m] : zf.factors) out.factors.emplace_back(BiPoly::from_x(p), m);
    f = *bi_divide_exact(f, BiPoly::from_x(cx));
  }
  ZPoly cy = content_in_y(f);
  if (cy.degree() >= 1) {
    auto zf = factor_z(cy, rng);
    out.unit *= zf.unit;
    for (auto& [p, m] : zf.factors) out.factors.emplace_back(BiPoly::from_y(p), m);
    f = *bi_divide_exact(f, BiPoly::from_y(cy));
  }
  if (f.degx() >= 1 && f.degy() >= 1) {
    BiPoly dfy = divided_derivative(f, 0, 1);
    BiPoly g = bi_gcd(f, dfy);
    BiPoly sf = (g.degx() <= 0 && g.degy() <= 0) ? f : bi_primitive(*bi_divide_exact(f, g));
    for (auto& h : bi_factor_squarefree(sf, rng)) {
      int mult = 0;
      BiPoly w = f;
      for (;;) {
        auto q = bi_divide_exact(w, h);
        if (!q) break;
        ++mult;
        w = *q;
      }
      out.factors.emplace_back(h, mult);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return bipoly_less(a.first, b.first); });
  return out;
}

} // namespace tsd
