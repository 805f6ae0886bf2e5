#pragma once
// Algebraic numbers with certified embeddings. A number is (minimal
// polynomial, embedding index); the embedding order is the deterministic root
// order of isolate_all_roots (real roots ascending, then complex pairs).
// Field arithmetic is exact in Q[z]/(m); the archimedean side is certified
// interval refinement of the chosen root box.
#include <vector>
#include <utility>
#include "tsd/poly.hpp"
#include "tsd/bipoly.hpp"
#include "tsd/interval.hpp"
#include "tsd/util.hpp"

namespace tsd {

struct AlgebraicNumber {
  ZPoly minpoly; // primitive, irreducible, lc > 0
  int embedding = 0;

  int degree() const { return minpoly.degree(); }
  bool is_rational() const { return minpoly.degree() == 1; }
  mpq_class rational_value() const; // requires degree 1

  // validates irreducibility (throws ReducibleMinpoly) and the index range
  static AlgebraicNumber make(const ZPoly& minpoly, int embedding, Rng& rng);
  static AlgebraicNumber from_rational(const mpq_class& r);
  // picks the embedding whose certified box is nearest the hint
  static AlgebraicNumber nearest(const ZPoly& minpoly, double re_hint, double im_hint, Rng& rng);
};

// certified enclosure of the chosen embedding, both edges at most `width` wide
Complex refine_embedding(const AlgebraicNumber& a, const mpq_class& width);
bool embedding_is_real(const AlgebraicNumber& a);
// all embeddings in the deterministic order
std::vector<Complex> conjugate_boxes(const ZPoly& minpoly, const mpq_class& width);

// ---- rational points of the projective line ----

struct ProjPoint {
  mpz_class a, b; // coprime; canonical sign: b > 0, or b == 0 and a == 1

  static ProjPoint make(const mpz_class& a, const mpz_class& b); // canonicalizes
  static ProjPoint from_rational(const mpq_class& r);            // (num : den)
  mpq_class affine() const; // a/b, requires b != 0
  bool operator==(const ProjPoint& o) const { return a == o.a && b == o.b; }
};

// ---- continued fractions of real algebraic numbers ----

struct ContinuedFraction {
  std::vector<mpz_class> partial_quotients;                 // a_0, a_1, ...
  std::vector<std::pair<mpz_class, mpz_class>> convergents; // (p_k, q_k), q_k > 0
};

// first `count` partial quotients (fewer when the expansion of a rational
// number terminates); throws NotReal for a non-real embedding
ContinuedFraction cf_expand(const AlgebraicNumber& a, int count);

// convergents p/q as projective points, in increasing q
std::vector<ProjPoint> cf_convergents(const AlgebraicNumber& a, int count);

// ---- arithmetic in Q[z]/(m), representatives always reduced ----

QPoly nf_reduce(const QPoly& a, const ZPoly& m);
QPoly nf_add(const QPoly& a, const QPoly& b, const ZPoly& m);
QPoly nf_sub(const QPoly& a, const QPoly& b, const ZPoly& m);
QPoly nf_mul(const QPoly& a, const QPoly& b, const ZPoly& m);
QPoly nf_inv(const QPoly& a, const ZPoly& m); // throws DivisionByZero on zero
QPoly nf_pow(const QPoly& a, unsigned long e, const ZPoly& m);

// f(x, y) with x := a, y := b, everything in Q[z]/(m)
QPoly nf_eval_bipoly(const BiPoly& f, const QPoly& a, const QPoly& b, const ZPoly& m);

// divided-power jet coefficient D^(i,j) f evaluated at (a, b) in Q[z]/(m);
// orders past the degree give the zero element
QPoly jet_coefficient(const BiPoly& f, const QPoly& a, const QPoly& b, int i, int j,
                      const ZPoly& m);

// certified enclosure of the image of a representative under the embedding
Complex nf_embed(const QPoly& rep, const AlgebraicNumber& gamma, const mpq_class& width);

// ---- compositum ----

// gamma = a1 + k*a2 generating Q(a1, a2), with both generators expressed as
// polynomials in gamma
struct Compositum {
  AlgebraicNumber gamma;
  long k = 0;
  QPoly a1_rep;
  QPoly a2_rep;
};

Compositum primitive_element(const AlgebraicNumber& a1, const AlgebraicNumber& a2, Rng& rng);

// resultant with respect to y of two bivariate polynomials, an element of Z[x]
ZPoly bi_resultant_y(const BiPoly& a, const BiPoly& b);

} // namespace tsd
