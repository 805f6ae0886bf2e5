#pragma once
// Desk-scale checks of the index machinery: decomposing a section into
// irreducible components, auditing the multiplicity of non-fiber components
// inside an index sublevel locus, heights of the component cycles (closed
// forms for points and fibers, Monte Carlo quadrature for curves), and the
// local multiplicity bound at an isolated deep-index point.
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "tsd/auxpoly.hpp"
#include "tsd/bipoly.hpp"
#include "tsd/heights.hpp"
#include "tsd/interval.hpp"
#include "tsd/numbers.hpp"

namespace tsd {

enum class ComponentShape { fiber1, fiber2, curve, point_support };

struct Component {
  // irreducible and primitive; ignored for point_support components
  BiPoly factor;
  long multiplicity = 1;
  ComponentShape shape = ComponentShape::curve;
  std::optional<Real> height; // filled on demand by height_of_cycle
  // the rational point carrying a point_support component
  std::optional<std::pair<ProjPoint, ProjPoint>> point;

  static Component of_point(const ProjPoint& p1, const ProjPoint& p2);
};

// complete factorization over Q: content * prod factor^mult == f exactly;
// vertical factors (no second variable) are classified fiber1, horizontal
// ones fiber2, everything else curve. Deterministic order.
std::vector<Component> factor_components(const BiPoly& f);

struct FiberAuditEntry {
  Component component;
  bool exempt = false;   // fiber components are outside the lemma's scope
  bool in_locus = false; // sampled containment in the index-eps locus
  mpq_class threshold;   // eps d1 / theta1
  bool pass = true;      // exempt, or not contained, or mult >= threshold
};

struct FiberAuditReport {
  std::vector<FiberAuditEntry> entries;
  mpq_class epsilon;
  unsigned long seed = 0;
  bool all_pass = true;
  std::string caveat;
};

// for every non-fiber component of div(f) contained in the locus
// {index_at >= eps} (membership tested by exact jets at algebraic points
// over 5 random rational specializations of the second variable - sampling,
// hence the recorded caveat), check multiplicity >= eps d1/theta1
FiberAuditReport fiber_multiplicity_audit(const BiPoly& f, const WeightSystem& w,
                                          const mpq_class& eps,
                                          unsigned long seed = 20240901);

// height of the component cycle under the polarization O(d1,d2), product
// Fubini-Study metrics at the archimedean place:
//  - point (P,Q):      d1 h_FS(P) + d2 h_FS(Q)
//  - fiber {P} x P1:   2 d1 d2 h0(F) + deg(F) d2^2 h(P1), where h0 is the
//                      height of the defining zero-cycle (certified root
//                      boxes) and symmetrically for horizontal fibers
//  - curve div(g):     e1 (d1 d2 + d2^2/2) + e2 (d1^2/2 + d1 d2)
//                      + 2 d1 d2 E[log ||g||] for g of bidegree (e1,e2),
//                      the expectation over the product Fubini-Study
//                      probability measure by seeded Monte Carlo; the
//                      returned interval is mean +- 3 stderr (heuristic
//                      envelope, not a proof)
// Fills c.height and returns it. With a target width set, throws
// QuadratureBudgetExceeded when the envelope cannot meet it.
Real height_of_cycle(Component& c, int d1, int d2, long samples = 200000,
                     unsigned long seed = 1,
                     std::optional<double> target_width = std::nullopt);

// height of the full projective line as a cycle over the integers with the
// Fubini-Study metric on O(1); the defining integral has the closed form 1/2
Real height_projective_line();

struct MultiplicityBound {
  mpq_class bound;                  // (1/theta1 theta2)(eps/4)^2 d1 d2
  mpq_class witness_e1, witness_e2; // eps d1/(4 theta1), eps d2/(4 theta2)
  long checked_jets = 0;
};

// verifies by exact jet evaluation that every divided derivative D^(i,j) f
// with i < e1 and j < e2 vanishes at P, i.e. the local expansion lies in the
// monomial ideal (z1^e1, z2^e2); returns bound 0 without checks when
// f(P) != 0, throws NotIsolated when a fiber through P lies in div(f) or
// when the jet containment fails
MultiplicityBound zero_dim_mult_bound(const BiPoly& f, const PointP1& p1,
                                      const PointP1& p2, const WeightSystem& w,
                                      const mpq_class& eps);

struct IndexTheoremReport {
  double sup_grid = 0.0;    // grid estimate of the normalized sup
  Real sup_trivial;         // rigorous upper bound log sum |a_uv|
  Real norm_target;         // (d1+d2) log C
  bool hyp_norm_estimate = false; // sup_grid <= norm_target
  bool hyp_norm_rigorous = false; // sup_trivial <= norm_target (certified)
  Real h1, h2;              // Fubini-Study heights of the two points
  bool hyp_heights = false; // d2 h2 >= d1 h1, i.e. h2/h1 >= d1/d2
  mpq_class index_measured;
  mpq_class epsilon;
  bool conclusion = false;  // index_measured <= epsilon
};

// empirical harness: measures both hypotheses and the conclusion on a
// concrete instance; no implication is asserted (the constants relating
// them are ineffective)
IndexTheoremReport verify_index_theorem_instance(const BiPoly& f, const ProjPoint& p1,
                                                 const ProjPoint& p2,
                                                 const WeightSystem& w,
                                                 const mpq_class& eps, const Real& c);

// smallest S with mult * h(component) <= S log(C) d1 d2 (d1+d2) across the
// components of f: an empirical estimate of the Bezout-type constant
Real estimate_bezout_s(const BiPoly& f, const Real& c, int d1, int d2,
                       long samples = 20000, unsigned long seed = 2);

nlohmann::json to_json(const FiberAuditReport& r);
nlohmann::json to_json(const IndexTheoremReport& r);

} // namespace tsd
