#pragma once
// Dense univariate polynomials over Z and Q: exact arithmetic, content and
// primitive parts, subresultant gcd, Sturm sequences, certified root
// isolation, Taylor shifts and homogeneous evaluation. This is the substrate
// for algebraic numbers, divisors and the factorization engine.
#include <vector>
#include <optional>
#include <gmpxx.h>
#include "tsd/interval.hpp"
#include "tsd/util.hpp"

namespace tsd {

template <class T>
struct Poly {
  // c[i] multiplies x^i; invariant: c.empty() or c.back() != 0
  std::vector<T> c;

  Poly() = default;
  Poly(std::initializer_list<T> v) : c(v) { normalize(); }
  explicit Poly(std::vector<T> v) : c(std::move(v)) { normalize(); }

  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
  const T& lc() const { return c.back(); }
  T coeff(int i) const { return (i >= 0 && i < static_cast<int>(c.size())) ? c[i] : T(0); }

  static Poly x_power(int k) {
    Poly p;
    p.c.assign(k + 1, T(0));
    p.c[k] = 1;
    return p;
  }

  bool operator==(const Poly& o) const { return c == o.c; }
};

using ZPoly = Poly<mpz_class>;
using QPoly = Poly<mpq_class>;

template <class T> Poly<T> operator+(const Poly<T>& a, const Poly<T>& b) {
  Poly<T> r;
  r.c.resize(std::max(a.c.size(), b.c.size()), T(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.normalize();
  return r;
}

template <class T> Poly<T> operator-(const Poly<T>& a, const Poly<T>& b) {
  Poly<T> r;
  r.c.resize(std::max(a.c.size(), b.c.size()), T(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.normalize();
  return r;
}

template <class T> Poly<T> operator-(const Poly<T>& a) {
  Poly<T> r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

template <class T> Poly<T> operator*(const Poly<T>& a, const Poly<T>& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly<T> r;
  r.c.assign(a.c.size() + b.c.size() - 1, T(0));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  r.normalize();
  return r;
}

template <class T> Poly<T> operator*(const T& s, const Poly<T>& a) {
  if (s == 0) return {};
  Poly<T> r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

// evaluation in an arbitrary commutative ring R given embedding of T
template <class T, class R, class Embed>
R horner(const Poly<T>& f, const R& x, const R& zero, Embed embed) {
  R acc = zero;
  for (int i = f.degree(); i >= 0; --i) acc = acc * x + embed(f.c[i]);
  return acc;
}

mpq_class eval_q(const ZPoly& f, const mpq_class& x);
mpz_class eval_z(const ZPoly& f, const mpz_class& x);
Real eval_interval(const ZPoly& f, const Real& x, mpfr_prec_t prec = kDefaultPrec);
Complex eval_interval(const ZPoly& f, const Complex& x, mpfr_prec_t prec = kDefaultPrec);

// homogeneous evaluation F(a,b) = b^deg * f(a/b) of the degree-`deg`
// homogenization (deg >= degree(f))
mpz_class eval_homogeneous(const ZPoly& f, int deg, const mpz_class& a, const mpz_class& b);

ZPoly derivative(const ZPoly& f);
mpz_class content(const ZPoly& f);
ZPoly primitive_part(const ZPoly& f);        // content removed, lc > 0
ZPoly z_from_q(const QPoly& f, mpz_class* den_out = nullptr); // returns den * f, den = lcm of denominators
QPoly q_from_z(const ZPoly& f);

// exact division; throws ZeroPolynomial on zero divisor, returns nullopt if
// the division leaves a remainder
std::optional<ZPoly> divide_exact(const ZPoly& f, const ZPoly& g);
std::optional<QPoly> divide_exact_q(const QPoly& f, const QPoly& g);
QPoly qdivrem(const QPoly& f, const QPoly& g, QPoly* rem);

ZPoly gcd_z(const ZPoly& f, const ZPoly& g);  // primitive gcd via subresultant PRS
// extended gcd over Q: monic g = gcd(a,b) with s*a + t*b = g
QPoly q_extgcd(const QPoly& a, const QPoly& b, QPoly& s, QPoly& t);
ZPoly squarefree_part(const ZPoly& f);
// squarefree decomposition: list of (factor, multiplicity), factors primitive
std::vector<std::pair<ZPoly, int>> squarefree_decomposition(const ZPoly& f);
mpz_class resultant(const ZPoly& f, const ZPoly& g);
mpz_class discriminant(const ZPoly& f);

// Taylor shift: f(x + a) computed exactly
ZPoly taylor_shift(const ZPoly& f, const mpz_class& a);
QPoly taylor_shift(const QPoly& f, const mpq_class& a);
ZPoly reverse_poly(const ZPoly& f, int deg); // x^deg * f(1/x)

// ---- Sturm machinery and certified real root isolation ----

struct SturmChain {
  std::vector<ZPoly> seq;
  static SturmChain build(const ZPoly& squarefree);
  int sign_changes_at(const mpq_class& x) const;
  // number of roots in (a, b]
  int count_roots(const mpq_class& a, const mpq_class& b) const;
  int count_real_roots() const; // over all of R
};

mpq_class root_bound(const ZPoly& f); // Cauchy bound: all roots have |z| < bound

// disjoint isolating intervals for all real roots, sorted ascending; each
// interval (a,b] holds exactly one root and endpoints are not roots
std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const ZPoly& f);

// shrink an isolating interval below `width` by bisection (exact midpoint
// sign tests; the polynomial must be squarefree on the interval)
std::pair<mpq_class, mpq_class> refine_real_root(const ZPoly& f,
                                                 std::pair<mpq_class, mpq_class> iv,
                                                 const mpq_class& width);

// All complex roots as certified disjoint boxes (real roots get degenerate
// imaginary parts [0,0]); deterministic: real roots ascending, then strictly
// complex roots ordered by (re, im). The polynomial must be squarefree.
std::vector<Complex> isolate_all_roots(const ZPoly& f, const mpq_class& width);

} // namespace tsd
