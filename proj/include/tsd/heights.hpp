#pragma once
// Heights and local Weil functions on the projective line over Q. A reduced
// effective divisor is carried by a primitive squarefree homogeneous form;
// log|F(a,b)| decomposes exactly into local terms over the places of Q, which
// makes the product formula an identity rather than an approximation. On top
// of that sit the size invariants H, S = max(1, 2H + c0) and T = S*H of a
// divisor, with c0 the metric-comparison constant fixed once below.
#include <optional>
#include <vector>
#include <utility>
#include <gmpxx.h>
#include "tsd/interval.hpp"
#include "tsd/numbers.hpp"
#include "tsd/poly.hpp"
#include "tsd/util.hpp"

namespace tsd {

struct Place {
  bool finite = false;
  mpz_class prime; // meaningful only when finite

  static Place archimedean() { return Place{}; }
  static Place at_prime(const mpz_class& p); // validates primality
  bool operator==(const Place& o) const {
    return finite == o.finite && (!finite || prime == o.prime);
  }
};

struct DivisorData {
  // F(a,b) = sum_i form.c[i] a^i b^(deg-i); primitive, and squarefree as a
  // form: the dehomogenization has no repeated root and deg <= degree+1 (the
  // excess degree puts the point at infinity in the divisor, at most once)
  ZPoly form;
  int deg = 0;

  static DivisorData make(const ZPoly& form, int deg);
  static DivisorData from_algnum(const AlgebraicNumber& alpha);
  mpz_class value_at(const ProjPoint& p) const; // F(a,b)
};

struct PhiWeights {
  std::vector<std::pair<Place, mpq_class>> entries;

  // validates: distinct places, weights in [0,1] summing to exactly 1
  static PhiWeights make(std::vector<std::pair<Place, mpq_class>> entries);
  mpq_class at(const Place& v) const; // 0 for places outside the support
};

// (1/2) log(a^2 + b^2) on the canonical coprime representative
Real fs_height(const ProjPoint& p, mpfr_prec_t prec = kDefaultPrec);

// local Weil function of D at v: ord_p(F(a,b)) log p at a finite place,
// -log( |F(a,b)| / (a^2+b^2)^(deg/2) ) at the archimedean one
Real weil_local(const DivisorData& d, const Place& v, const ProjPoint& p,
                mpfr_prec_t prec = kDefaultPrec);

// sum of the local terms over all places (only primes dividing F(a,b)
// contribute); a prime bound restricts the finite part to p <= bound
Real weil_sum(const DivisorData& d, const ProjPoint& p,
              std::optional<long> prime_bound = std::nullopt,
              mpfr_prec_t prec = kDefaultPrec);

// coefficient 1-norm of the form: certified bound for sup |F| on a^2+b^2=1,
// so the archimedean Weil function is >= -log of this everywhere off D
mpz_class form_sup_bound(const DivisorData& d);

struct TInvariant {
  Real h;  // orbit height max over components (before the clamp at 1)
  Real big_h; // H = max(1, h)
  Real s;  // S = max(1, 2H + c0)
  Real t;  // T = S*H
};

TInvariant t_of_divisor(const DivisorData& d, mpfr_prec_t prec = kDefaultPrec);

// classical approximation exponent kappa = -log|alpha - a/b| / log max(|a|,|b|)
Real approx_quality(const AlgebraicNumber& alpha, const ProjPoint& p,
                    mpfr_prec_t prec = kDefaultPrec);

// The comparison constant c0: sup-norm log-ratio between the metric the
// diagonal section induces on the canonical bundle and the inverse-square
// Fubini-Study metric. Local computation for the diagonal metric
// |ad-bc| / sqrt(a^2+b^2) sqrt(c^2+d^2): differentiating the section along
// the second factor at (z, z) gives the conormal norm 1/(1+|z|^2), and the
// Fubini-Study norm of the corresponding degree-2 section b^2 at (z:1) is the
// same expression. The scan below certifies the pointwise log-ratio on a grid
// and returns its hull, a tight interval around 0.
Real metric_comparison_constant(mpfr_prec_t prec = kDefaultPrec);

// height against the metrized canonical bundle: -2 h_FS(P) + c0
Real h_omega(const ProjPoint& p, mpfr_prec_t prec = kDefaultPrec);

} // namespace tsd
