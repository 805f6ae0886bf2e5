#pragma once
// Metric data of the staircase blow-up and the inequality-chain certificates
// built on top of it. The blow-up itself is never materialized: the only
// quantities consumed downstream are the exceptional-divisor norms at the
// strict transform of a point pair (a minimum over the staircase's minimal
// monomial generators at finite places, a smooth quotient-metric sum at the
// archimedean one), the first nonvanishing divided derivative of the
// auxiliary section, and the Arakelov degrees these induce. certify_pair
// evaluates the whole chain numerically, records both sides of every
// inequality, and emits a machine-checkable certificate whose outcome can be
// recomputed from the recorded table alone.
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "tsd/auxpoly.hpp"
#include "tsd/heights.hpp"
#include "tsd/interval.hpp"
#include "tsd/numbers.hpp"

namespace tsd {

// -log ||E||_v at the strict transform of (p1, p2), for the exceptional
// divisor of the blow-up along the weighted staircase ideal at threshold
// `delta` (which overrides w.delta). H is the set of minimal monomial
// generators of the at_least staircase. Finite places take the exact minimum
// of j1 ord1 + j2 ord2 over H, times log p; the archimedean place takes the
// quotient-metric value -1/2 log sum_H exp(-2 (j1 lam1 + j2 lam2)), which
// lies in [min - 1/2 log|H|, min]. Throws PointOnDivisor when either
// coordinate lies on its divisor.
Real exceptional_log_norm(const ProjPoint& p1, const ProjPoint& p2,
                          const DivisorData& dv1, const DivisorData& dv2,
                          const WeightSystem& w, const mpq_class& delta,
                          const Place& v, mpfr_prec_t prec = kDefaultPrec);

struct ExceptionalWitness {
  Place v;
  int j1 = 0, j2 = 0; // generator minimizing the local pairing
  Real lhs;           // -log ||E||_v
  Real rhs;           // j1 lam1 + j2 lam2 - slack_c * (d1 + d2)
  Real slack_c;       // (1/2) log|H| / (d1 + d2) archimedean, 0 finite
  bool holds = false; // lhs >= rhs not refuted by the enclosures
};

struct ExceptionalDegreeReport {
  std::vector<ExceptionalWitness> witnesses; // one per requested place
  // Arakelov degree of the pullback of O(E): the sum of -log||E||_v over all
  // places. Only primes dividing one of the two form values contribute, so
  // the sum is finite and exact up to the single archimedean term.
  Real total_degree;
  bool all_hold = false;
};

// per-place lower bound for the exceptional norm against the witness
// generator, plus the total degree. The archimedean bound is tight when all
// generator pairings coincide, so `holds` records non-refutation rather than
// a strict certified inequality.
ExceptionalDegreeReport exceptional_degree_audit(
    const ProjPoint& p1, const ProjPoint& p2, const DivisorData& dv1,
    const DivisorData& dv2, const WeightSystem& w, const mpq_class& delta,
    const std::vector<Place>& s, mpfr_prec_t prec = kDefaultPrec);

// the fixed chart-comparison constant max(2/R, A2/A1): R = 1/2 is the inner
// radius of the two-disk cover of the line, and [A1, A2] hulls the conformal
// factor 1/(1+|z|^2) over the cover, scanned numerically; evaluates to 4
mpq_class chart_comparison_constant();

struct DerivedSection {
  int i1 = 0, i2 = 0; // divided-derivative orders
  mpq_class weight;   // w(i1, i2), the threshold actually achieved
  mpq_class value;    // exact value of D^(i1,i2) f at the point, in its chart
  Real lognorm_bound; // log sum |coeffs of f| + (d1 + d2) log C1
};

// first divided derivative of f (ordered by weight, ties lexicographic)
// with a nonzero value at the rational point pair. Requires the index of f
// at the pair to be at most eps (else IndexTooLarge); the returned weight is
// then itself at most eps.
DerivedSection derived_section(const BiPoly& f, const PointP1& p1,
                               const PointP1& p2, const WeightSystem& w,
                               const mpq_class& eps,
                               mpfr_prec_t prec = kDefaultPrec);

struct LocalCauchyReport {
  long samples = 0;
  // max over samples of |f(z)| / max_H |z1^j1 z2^j2| (the chart-trivialized
  // strict transform), inside the polydisk and on its torus boundary
  double interior_max_ratio = 0.0;
  double boundary_max_ratio = 0.0;
  double boundary_sup_f = 0.0;   // max |f| over the torus samples
  double empirical_b = 0.0;      // (interior max / boundary sup)^(1/(d1+d2))
  bool boundary_dominates = false;
};

// samples the trivialized transform of a section lying in the staircase
// ideal at threshold `delta` (every below-threshold monomial absent, else
// NotInIdeal) and reports the observed norm-comparison constant; the
// boundary flag records that the interior maximum never beat the torus one
LocalCauchyReport verify_localcauchy(const BiPoly& f, const WeightSystem& w,
                                     const mpq_class& delta, int samples,
                                     std::uint64_t seed = 7);

struct PullbackSpec {
  int d1 = 0, d2 = 0;                // twist degrees on the two factors
  int i1 = 0, i2 = 0;                // relative-canonical powers
  std::optional<mpq_class> e_level;  // subtract the exceptional degree at
                                     // this threshold when present
};

// Arakelov degree of the restriction to the point pair:
// d1 h1 + d2 h2 + i1 h_omega(P1) + i2 h_omega(P2) [- exceptional degree].
// The divisor pair and weight system are required only when e_level is set.
Real pullback_degree(const ProjPoint& p1, const ProjPoint& p2,
                     const PullbackSpec& spec,
                     const DivisorData* dv1 = nullptr,
                     const DivisorData* dv2 = nullptr,
                     const WeightSystem* w = nullptr,
                     mpfr_prec_t prec = kDefaultPrec);

enum class CertificateOutcome { height_bound, hypothesis_violation, chain_satisfied };

struct ChainEntry {
  std::string name;
  Real left, right;
  std::string relation; // "<", "<=", ">", ">="
  bool holds = false;
  std::string note; // exactness remarks, witnesses (empty when routine)
};

struct WeilTableEntry {
  int divisor = 1; // factor index, 1 or 2
  Place v;
  Real lambda;
};

struct CertifyConfig {
  mpq_class a3 = 2;      // comparison h_omega <= a3 * h on each factor
  mpq_class c1 = 4;      // chart-comparison constant for derived norms
  Real big_a = Real::from_long(1); // scale reported by the construction
  long d_cap = 0;        // cap on the working degree d (0 = uncapped)
  mpfr_prec_t prec = kDefaultPrec;
};

struct Certificate {
  // inputs as given
  ZPoly min1, min2;
  ProjPoint p1, p2;
  mpq_class theta1, theta2, epsilon;
  std::vector<Place> places;
  PhiWeights phi;
  CertifyConfig config;

  Real h1, h2, t1, t2; // heights of the points, T-invariants of the divisors
  long d = 0;          // working degree; 0 when the run stopped at hypotheses
  int d1 = 0, d2 = 0;
  mpq_class eps0, eps1, eps2, eps3, eps3_eff;

  Real aux_norm_log;        // rigorous log sup bound of the section used
  mpq_class index_measured; // exact index of that section at the pair
  bool index_available = false;
  int i1 = 0, i2 = 0;       // derived-section orders
  mpq_class derived_value;  // its exact chart value
  mpq_class derived_weight;
  long kernel_vector = -1;  // family member used; -1 = the reduced pick

  std::vector<WeilTableEntry> weil_table;
  Real exceptional_degree;
  std::vector<ChainEntry> chain;

  CertificateOutcome outcome = CertificateOutcome::chain_satisfied;
  std::string violation; // description iff hypothesis_violation
  Real height_bound;     // meaningful iff outcome == height_bound
};

// evaluates the full inequality chain for a candidate approximation pair:
// per-place proximity hypotheses first (a failure short-circuits into
// hypothesis_violation with the exact ratio when the form value is a unit),
// then degree selection, auxiliary construction, index measurement, derived
// section, exceptional norms, and the epsilon budget. The outcome is
// height_bound with the measured-constant bound when every recorded
// inequality holds, chain_satisfied otherwise. Throws EmptyKernel from the
// construction and PrecisionExhausted when a hypothesis comparison stays
// undecidable at escalated precision.
Certificate certify_pair(const AlgebraicNumber& a1, const AlgebraicNumber& a2,
                         const ProjPoint& p1, const ProjPoint& p2,
                         const mpq_class& theta1, const mpq_class& theta2,
                         const mpq_class& epsilon, const std::vector<Place>& s,
                         const PhiWeights& phi, const CertifyConfig& cfg = {});

// JSON document with every real as {value, width}; the outcome section and
// the measured aggregate constants are computed from the serialized table,
// so a replay reproduces them byte for byte
nlohmann::json certificate_to_json(const Certificate& c);

// strips the outcome and derived constants from a certificate document and
// recomputes them from the recorded chain table; byte-identical to the input
// for an intact certificate
nlohmann::json certificate_replay(const nlohmann::json& doc);

} // namespace tsd
