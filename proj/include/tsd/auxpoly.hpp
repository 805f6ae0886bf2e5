#pragma once
// Weighted vanishing conditions and the construction of small auxiliary
// sections of O(d1,d2) on the product of two projective lines. A weight
// system assigns w(i,j) = (i/d1) theta1 + (j/d2) theta2 to the divided
// derivative D^(i,j); the construction finds an integer section whose jets
// of weight below delta all vanish at a prescribed algebraic point pair,
// and the index measures the first non-vanishing weight at any point.
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "tsd/bipoly.hpp"
#include "tsd/interval.hpp"
#include "tsd/lattice.hpp"
#include "tsd/numbers.hpp"

namespace tsd {

struct WeightSystem {
  mpq_class theta1, theta2; // both >= 1
  int d1 = 1, d2 = 1;       // bidegree, both >= 1
  mpq_class delta;          // vanishing threshold, >= 0

  static WeightSystem make(const mpq_class& theta1, const mpq_class& theta2,
                           int d1, int d2, const mpq_class& delta);
  mpq_class weight(long i, long j) const;
};

enum class StaircaseMode { below, at_least };

struct Staircase {
  WeightSystem weights;
  StaircaseMode mode = StaircaseMode::below;
  std::vector<std::pair<int, int>> members; // lexicographically sorted
};

// all grid pairs 0 <= i <= d1, 0 <= j <= d2 with w(i,j) < delta (below) or
// w(i,j) >= delta (at_least); comparisons are exact
Staircase staircase(const WeightSystem& w, StaircaseMode mode);

// minimal members of the at_least staircase under the componentwise order;
// every at_least pair dominates one of these
std::vector<std::pair<int, int>> staircase_minimal_generators(const WeightSystem& w);

struct StaircaseReport {
  long exact_count = 0;   // size of the below staircase
  mpq_class area_value;   // d1 d2 delta^2 / (2 theta1 theta2)
  mpq_class error_bound;  // delta d1/theta1 + delta d2/theta2 + 2
  // the triangle w < delta spills over the grid edge i = d1 or j = d2 (in
  // particular when it covers the whole grid); the area comparison is only
  // guaranteed when this is false
  bool saturated = false;
  bool bound_holds = false; // |exact_count - area_value| <= error_bound
};

StaircaseReport staircase_count_report(const WeightSystem& w);

// power-basis presentation of the field generated by two algebraic numbers:
// both are expressed as polynomials in a single generator
struct JointField {
  ZPoly minpoly;  // of the generator; degree = [Q(a1,a2) : Q]
  int embedding = 0;
  QPoly rep1, rep2;

  int degree() const { return minpoly.degree(); }
};

JointField joint_field(const AlgebraicNumber& a1, const AlgebraicNumber& a2);

// the linear conditions "D^(i,j) f (a1, a2) = 0 for all below-staircase
// (i,j)" on the coefficient vector of f, over the rationals, written as an
// integer matrix: one row per power-basis coordinate of Q(a1,a2) and
// below-staircase pair (blocks of [Q(a1,a2):Q] rows, pairs in lex order),
// columns indexed by monomials x^u y^v in row-major order u*(d2+1)+v, each
// row scaled by the least common denominator of its entries
IntegerMatrix vanishing_system(const AlgebraicNumber& a1, const AlgebraicNumber& a2,
                               const WeightSystem& w);

struct ConstructionReport {
  long rows = 0, cols = 0;
  long rank_bound = 0;          // rank of a random modular reduction; <= true rank
  long kernel_dim = 0;          // cols - rank_bound; exact iff kernel_dim_exact
  bool kernel_dim_exact = false;
  std::string route;            // "kernel" (exact nullspace) or "generators"
  long verified_conditions = 0; // re-checked by exact jet evaluation

  // sup of log |f| / (1+|x|^2)^(d1/2) (1+|y|^2)^(d2/2) over both factors:
  // a grid estimate (about 10^6 sample pairs, plus a mesh-size correction)
  // and a rigorous upper bound log sum |a_uv|
  double log_sup_grid = 0.0;
  Real log_sup_trivial;

  // slack 2 theta1 theta2 - delta^2 [Q(a1,a2):Q] of the counting hypothesis,
  // and the comparison target A/slack * T(D1) T(D2) (d1+d2) built from the
  // height invariants of the two minimal polynomials (valid iff slack > 0)
  mpq_class epsilon_slack;
  bool target_valid = false;
  Real target;
};

// a nonzero integer section of O(d1,d2) whose below-staircase jets all
// vanish at (a1, a2); throws EmptyKernel when the conditions admit only the
// zero section. Every jet the weight system demands is re-verified by exact
// evaluation before the polynomial is returned.
std::pair<BiPoly, ConstructionReport> construct_auxiliary(const AlgebraicNumber& a1,
                                                          const AlgebraicNumber& a2,
                                                          const WeightSystem& w,
                                                          const Real& big_a);

std::pair<BiPoly, ConstructionReport> construct_auxiliary(const AlgebraicNumber& a1,
                                                          const AlgebraicNumber& a2,
                                                          const WeightSystem& w);

// the spanning family construct_auxiliary selects from, in construction
// order: the exact nullspace basis when the system is small enough, the
// structural sections x^r y^s m(x)^p m(y)^q (x-y)^c otherwise. Every member
// satisfies the vanishing conditions; callers that need a section with an
// extra open condition (nonvanishing at a further point, say) scan this list
std::vector<BiPoly> auxiliary_family(const AlgebraicNumber& a1,
                                     const AlgebraicNumber& a2,
                                     const WeightSystem& w);

// point of the projective line over Q-bar: either a finite algebraic value
// or the point at infinity
struct PointP1 {
  bool infinite = false;
  AlgebraicNumber value; // meaningful iff !infinite

  static PointP1 finite(const AlgebraicNumber& v);
  static PointP1 at_infinity();
  static PointP1 from_proj(const ProjPoint& p); // rational points
};

// index of f at the point pair relative to the weight system: the minimal
// weight w(i,j) over pairs with D^(i,j) f nonzero at the point (0 when f
// itself is nonzero there). Points at infinity are handled by the exact
// chart swap x -> 1/x of the degree-(d1,d2) section. Throws ZeroPolynomial
// on f = 0, and rejects f of bidegree exceeding (d1, d2).
mpq_class index_at(const BiPoly& f, const PointP1& p1, const PointP1& p2,
                   const WeightSystem& w);
mpq_class index_at(const BiPoly& f, const AlgebraicNumber& a1,
                   const AlgebraicNumber& a2, const WeightSystem& w);

// row-major coefficient vector of length (d1+1)(d2+1) and its inverse
std::vector<mpz_class> coefficient_vector(const BiPoly& f, int d1, int d2);
BiPoly poly_from_coefficients(const std::vector<mpz_class>& v, int d1, int d2);

// grid estimate (25 moduli x 40 arguments per factor, mesh-corrected) of
// sup log |f| / ((1+|x|^2)^(d1/2) (1+|y|^2)^(d2/2)); an estimate, not a bound
double fs_sup_grid_estimate(const BiPoly& f, int d1, int d2);

// the section rewritten in the affine chart where both points are finite
// (coefficient reversal x -> 1/x at degree d1, y -> 1/y at d2), and the
// finite coordinate of a point in its chart (0 for the point at infinity)
BiPoly chart_section(const BiPoly& f, const PointP1& p1, const PointP1& p2, int d1,
                     int d2);
AlgebraicNumber chart_value(const PointP1& p);

// {"d1", "d2", "coeffs"}: row-major decimal strings; round-trips exactly
nlohmann::json poly_to_json(const BiPoly& f, int d1, int d2);
BiPoly poly_from_json(const nlohmann::json& j, int* d1 = nullptr, int* d2 = nullptr);

} // namespace tsd
