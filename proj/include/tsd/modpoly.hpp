#pragma once
// Dense polynomial arithmetic over Z/p for word-sized odd primes, plus the
// distinct-degree / equal-degree splitting used by the factorization engine.
// p must satisfy p < 2^31 so products fit in unsigned 64-bit arithmetic.
#include <vector>
#include <gmpxx.h>
#include "tsd/poly.hpp"
#include "tsd/util.hpp"

namespace tsd {

struct FpPoly {
  unsigned long p = 0;
  std::vector<unsigned long> c; // values in [0, p); invariant: back() != 0

  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  unsigned long lc() const { return c.back(); }
};

unsigned long fp_inv(unsigned long a, unsigned long p);

FpPoly fp_from_z(const ZPoly& f, unsigned long p);
ZPoly z_from_fp_symmetric(const FpPoly& f); // coefficients lifted to (-p/2, p/2]

FpPoly fp_add(const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
FpPoly fp_scalar(const FpPoly& a, unsigned long s);
FpPoly fp_monic(const FpPoly& a);
FpPoly fp_divrem(const FpPoly& a, const FpPoly& b, FpPoly* quot = nullptr);
FpPoly fp_gcd(const FpPoly& a, const FpPoly& b); // monic
// extended euclid: returns g (monic) and s, t with s*a + t*b = g
FpPoly fp_extgcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t);
FpPoly fp_powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod);
FpPoly fp_derivative(const FpPoly& f);

bool fp_squarefree(const FpPoly& f);

// monic irreducible factors of a monic squarefree polynomial over Z/p,
// deterministic given the rng state; sorted by (degree, coefficient tuple)
std::vector<FpPoly> fp_factor_squarefree(const FpPoly& f, Rng& rng);

} // namespace tsd
