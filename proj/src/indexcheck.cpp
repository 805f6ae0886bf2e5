#include "tsd/indexcheck.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "tsd/factor.hpp"
#include "tsd/util.hpp"

namespace tsd {

namespace {

const char* shape_name(ComponentShape s) {
  switch (s) {
    case ComponentShape::fiber1: return "fiber1";
    case ComponentShape::fiber2: return "fiber2";
    case ComponentShape::curve: return "curve";
    case ComponentShape::point_support: return "point-support";
  }
  return "?";
}

ZPoly clear_denominators(const QPoly& q) {
  mpz_class den = 1;
  for (const auto& v : q.c) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
  ZPoly r;
  r.c.reserve(q.c.size());
  for (const auto& v : q.c) {
    mpz_class s;
    mpz_divexact(s.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    r.c.push_back(v.get_num() * s);
  }
  r.normalize();
  return r;
}

// vertical factor as a univariate polynomial in its only variable
ZPoly vertical_poly(const BiPoly& f, bool first_variable) {
  ZPoly u;
  if (first_variable) {
    u.c.reserve(f.degx() + 1);
    for (int i = 0; i <= f.degx(); ++i) u.c.push_back(f.c[i][0]);
  } else {
    u.c = f.c.empty() ? std::vector<mpz_class>{} : f.c[0];
  }
  u.normalize();
  return u;
}

// height of the zero-cycle of a primitive integer polynomial on the line:
// log |lc| + (1/2) sum over roots of log(1 + |root|^2), from certified boxes
Real zero_cycle_height(const ZPoly& u) {
  Real h = log_of_mpq(mpq_class(abs(u.lc())));
  const auto boxes = conjugate_boxes(u, mpq_class(1, 1000000));
  for (const auto& b : boxes) {
    const Real n2 = Real::from_long(1) + sqr(b.re) + sqr(b.im);
    h = h + log(n2) / Real::from_long(2);
  }
  return h;
}

} // namespace

Component Component::of_point(const ProjPoint& p1, const ProjPoint& p2) {
  Component c;
  c.multiplicity = 1;
  c.shape = ComponentShape::point_support;
  c.point = std::make_pair(p1, p2);
  return c;
}

std::vector<Component> factor_components(const BiPoly& f) {
  if (f.is_zero()) throw ZeroPolynomial("factor_components: zero polynomial");
  Rng rng(0x636f6d70UL);
  BiFactorization fac = factor_bi(f, rng);
  std::vector<Component> out;
  out.reserve(fac.factors.size());
  for (auto& [g, m] : fac.factors) {
    Component c;
    c.factor = g;
    c.multiplicity = m;
    c.shape = g.degy() == 0   ? ComponentShape::fiber1
              : g.degx() == 0 ? ComponentShape::fiber2
                              : ComponentShape::curve;
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Component& a, const Component& b) {
    if (a.factor.degx() != b.factor.degx()) return a.factor.degx() < b.factor.degx();
    if (a.factor.degy() != b.factor.degy()) return a.factor.degy() < b.factor.degy();
    return coefficient_vector(a.factor, a.factor.degx(), a.factor.degy()) <
           coefficient_vector(b.factor, b.factor.degx(), b.factor.degy());
  });
  return out;
}

FiberAuditReport fiber_multiplicity_audit(const BiPoly& f, const WeightSystem& w,
                                          const mpq_class& eps, unsigned long seed) {
  FiberAuditReport r;
  r.epsilon = eps;
  r.seed = seed;
  r.caveat =
      "curve containment is tested at algebraic points over 5 random rational "
      "specializations; containment implies detection, but a component that "
      "merely meets the locus in the sampled points would be over-reported";

  mpq_class thr(eps);
  thr *= w.d1;
  thr /= w.theta1;

  Rng rng(seed);
  for (Component& comp : factor_components(f)) {
    FiberAuditEntry e;
    e.threshold = thr;
    if (comp.shape != ComponentShape::curve) {
      e.exempt = true;
    } else {
      bool all_in = true;
      long tested = 0;
      for (int trial = 0; trial < 5 && all_in; ++trial) {
        mpq_class cval(rng.range(-19, 19), rng.range(1, 12));
        cval.canonicalize();
        const QPoly uq = eval_at_y_q(comp.factor, cval);
        if (uq.degree() < 1) continue; // degenerate specialization
        const ZPoly ud = clear_denominators(uq);
        for (const auto& [fz, mz] : factor_z(ud, rng).factors) {
          (void)mz;
          AlgebraicNumber root =
              fz.degree() == 1
                  ? AlgebraicNumber::from_rational(mpq_class(-fz.c[0], fz.c[1]))
                  : AlgebraicNumber::make(fz, 0, rng);
          ++tested;
          if (index_at(f, root, AlgebraicNumber::from_rational(cval), w) < eps) {
            all_in = false;
            break;
          }
        }
      }
      e.in_locus = tested > 0 && all_in;
      if (e.in_locus && mpq_class(comp.multiplicity) < thr) e.pass = false;
    }
    e.component = std::move(comp);
    r.all_pass = r.all_pass && e.pass;
    r.entries.push_back(std::move(e));
  }
  return r;
}

Real height_projective_line() {
  // the Fubini-Study self-intersection integral over the line evaluates in
  // closed form: int_0^inf log(1+u)/(1+u)^2 du = 1, height = 1/2
  return Real::from_mpq(mpq_class(1, 2));
}

Real height_of_cycle(Component& c, int d1, int d2, long samples, unsigned long seed,
                     std::optional<double> target_width) {
  if (d1 < 1 || d2 < 1) throw std::invalid_argument("height_of_cycle: bad polarization");
  Real h;
  switch (c.shape) {
    case ComponentShape::point_support: {
      if (!c.point) throw std::invalid_argument("height_of_cycle: missing point");
      h = Real::from_long(d1) * fs_height(c.point->first) +
          Real::from_long(d2) * fs_height(c.point->second);
      break;
    }
    case ComponentShape::fiber1:
    case ComponentShape::fiber2: {
      const bool vertical = (c.shape == ComponentShape::fiber1);
      const ZPoly u = vertical_poly(c.factor, vertical);
      if (u.degree() < 1) throw std::invalid_argument("height_of_cycle: constant factor");
      const Real h0 = zero_cycle_height(u);
      const long da = vertical ? d1 : d2; // degree along the fiber direction
      const long db = vertical ? d2 : d1;
      h = Real::from_long(2 * da * db) * h0 +
          Real::from_long(u.degree() * db * db) * height_projective_line();
      break;
    }
    case ComponentShape::curve: {
      const BiPoly& g = c.factor;
      const int e1 = g.degx(), e2 = g.degy();
      // constant term e1 (d1 d2 + d2^2/2) + e2 (d1^2/2 + d1 d2) from the
      // arithmetic intersection numbers of the two line classes
      mpq_class cst(d2, 2);
      cst *= d2;
      cst += static_cast<long>(d1) * d2;
      cst *= e1;
      mpq_class cst2(d1, 2);
      cst2 *= d1;
      cst2 += static_cast<long>(d1) * d2;
      cst2 *= e2;
      cst += cst2;

      // scaled-double coefficients (largest coefficient ~ 1)
      long emax = LONG_MIN;
      for (const auto& row : g.c)
        for (const auto& z : row) {
          if (z == 0) continue;
          long e;
          mpz_get_d_2exp(&e, z.get_mpz_t());
          emax = std::max(emax, e);
        }
      std::vector<std::vector<double>> cd(e1 + 1, std::vector<double>(e2 + 1, 0.0));
      for (int i = 0; i <= e1; ++i)
        for (int j = 0; j <= e2; ++j) {
          if (g.c[i][j] == 0) continue;
          long e;
          const double m = mpz_get_d_2exp(&e, g.c[i][j].get_mpz_t());
          cd[i][j] = std::ldexp(m, static_cast<int>(std::max(e - emax, -1060L)));
        }

      Rng rng(seed);
      const double lg2 = std::log(2.0);
      const double pi = std::acos(-1.0);
      double sum = 0.0, sumsq = 0.0;
      long used = 0;
      for (long k = 0; k < samples; ++k) {
        // Fubini-Study probability measure: |z|^2/(1+|z|^2) uniform in [0,1)
        const double u1 = rng.unit(), u2 = rng.unit();
        const double r1 = std::sqrt(u1 / (1.0 - u1)), r2 = std::sqrt(u2 / (1.0 - u2));
        const std::complex<double> x = std::polar(r1, 2 * pi * rng.unit());
        const std::complex<double> y = std::polar(r2, 2 * pi * rng.unit());
        std::complex<double> acc = 0.0;
        for (int i = e1; i >= 0; --i) {
          std::complex<double> row = 0.0;
          for (int j = e2; j >= 0; --j) row = row * y + cd[i][j];
          acc = acc * x + row;
        }
        const double a = std::abs(acc);
        if (!(a > 0.0)) continue; // measure-zero hit on the divisor
        const double v = std::log(a) + emax * lg2 -
                         0.5 * e1 * std::log1p(r1 * r1) -
                         0.5 * e2 * std::log1p(r2 * r2);
        sum += v;
        sumsq += v * v;
        ++used;
      }
      if (used < 2) throw QuadratureBudgetExceeded("too few usable samples");
      const double mean = sum / used;
      const double var = std::max(0.0, sumsq / used - mean * mean);
      const double se = std::sqrt(var / used);
      const double scale = 2.0 * d1 * d2;
      // mean +- 3 stderr: heuristic envelope, flagged in the interface
      if (target_width && 2 * 3 * se * scale > *target_width)
        throw QuadratureBudgetExceeded("quadrature envelope " +
                                       std::to_string(2 * 3 * se * scale) +
                                       " exceeds the target width");
      h = Real::from_mpq(cst) +
          Real::whole(scale * (mean - 3 * se), scale * (mean + 3 * se));
      break;
    }
  }
  c.height = h;
  return h;
}

MultiplicityBound zero_dim_mult_bound(const BiPoly& f, const PointP1& p1,
                                      const PointP1& p2, const WeightSystem& w,
                                      const mpq_class& eps) {
  if (f.is_zero()) throw ZeroPolynomial("zero_dim_mult_bound: zero polynomial");
  if (eps <= 0) throw std::invalid_argument("zero_dim_mult_bound: eps must be positive");

  MultiplicityBound out;
  mpq_class e1(eps);
  e1 *= w.d1;
  e1 /= 4;
  e1 /= w.theta1;
  mpq_class e2(eps);
  e2 *= w.d2;
  e2 /= 4;
  e2 /= w.theta2;
  out.witness_e1 = e1;
  out.witness_e2 = e2;

  const BiPoly g = chart_section(f, p1, p2, w.d1, w.d2);
  const AlgebraicNumber x1 = chart_value(p1);
  const AlgebraicNumber x2 = chart_value(p2);
  const JointField F = joint_field(x1, x2);

  if (!nf_eval_bipoly(g, F.rep1, F.rep2, F.minpoly).is_zero()) {
    out.bound = 0; // index 0 at P: nothing to bound
    return out;
  }

  // a fiber through P inside div(f) rules out isolation outright
  {
    std::vector<QPoly> pw1(g.degx() + 1), pw2(g.degy() + 1);
    pw1[0] = pw2[0] = QPoly{mpq_class(1)};
    for (size_t k = 1; k < pw1.size(); ++k) pw1[k] = nf_mul(pw1[k - 1], F.rep1, F.minpoly);
    for (size_t k = 1; k < pw2.size(); ++k) pw2[k] = nf_mul(pw2[k - 1], F.rep2, F.minpoly);
    bool fiber1_in = true, fiber2_in = true;
    for (int j = 0; j <= g.degy() && fiber1_in; ++j) {
      QPoly s;
      for (int i = 0; i <= g.degx(); ++i)
        s = nf_add(s, nf_mul(QPoly{mpq_class(g.c[i][j])}, pw1[i], F.minpoly), F.minpoly);
      if (!s.is_zero()) fiber1_in = false;
    }
    for (int i = 0; i <= g.degx() && fiber2_in; ++i) {
      QPoly s;
      for (int j = 0; j <= g.degy(); ++j)
        s = nf_add(s, nf_mul(QPoly{mpq_class(g.c[i][j])}, pw2[j], F.minpoly), F.minpoly);
      if (!s.is_zero()) fiber2_in = false;
    }
    if (fiber1_in || fiber2_in)
      throw NotIsolated("a fiber through the point lies in the divisor");
  }

  // local expansion must lie in (z1^e1, z2^e2): all jets with i < e1, j < e2
  // vanish (any such jet would have weight < eps/4 + eps/4 = eps/2)
  for (int i = 0; mpq_class(i) < e1; ++i)
    for (int j = 0; mpq_class(j) < e2; ++j) {
      if (i > g.degx() || j > g.degy()) {
        ++out.checked_jets; // zero beyond the coefficient grid
        continue;
      }
      if (!jet_coefficient(g, F.rep1, F.rep2, i, j, F.minpoly).is_zero())
        throw NotIsolated("jet (" + std::to_string(i) + "," + std::to_string(j) +
                          ") escapes the monomial ideal: the index-eps/2 "
                          "hypothesis fails at the point");
      ++out.checked_jets;
    }

  mpq_class b(eps);
  b /= 4;
  b *= b;
  b *= w.d1;
  b *= w.d2;
  b /= w.theta1;
  b /= w.theta2;
  out.bound = b;
  return out;
}

IndexTheoremReport verify_index_theorem_instance(const BiPoly& f, const ProjPoint& p1,
                                                 const ProjPoint& p2,
                                                 const WeightSystem& w,
                                                 const mpq_class& eps, const Real& c) {
  IndexTheoremReport r;
  r.epsilon = eps;
  r.sup_grid = fs_sup_grid_estimate(f, w.d1, w.d2);
  mpz_class sum = 0;
  for (const auto& row : f.c)
    for (const auto& z : row) sum += abs(z);
  if (sum == 0) throw ZeroPolynomial("verify_index_theorem_instance: zero section");
  r.sup_trivial = log_of_mpq(mpq_class(sum));
  r.norm_target = Real::from_long(w.d1 + w.d2) * log(c);
  r.hyp_norm_estimate = r.sup_grid <= r.norm_target.mid_double();
  r.hyp_norm_rigorous = r.sup_trivial.certainly_le(r.norm_target);
  r.h1 = fs_height(p1);
  r.h2 = fs_height(p2);
  r.hyp_heights =
      (Real::from_long(w.d2) * r.h2).certainly_ge(Real::from_long(w.d1) * r.h1);
  r.index_measured = index_at(f, PointP1::from_proj(p1), PointP1::from_proj(p2), w);
  r.conclusion = (r.index_measured <= eps);
  return r;
}

Real estimate_bezout_s(const BiPoly& f, const Real& c, int d1, int d2, long samples,
                       unsigned long seed) {
  auto comps = factor_components(f);
  const Real denom = log(c) * Real::from_long(static_cast<long>(d1) * d2 * (d1 + d2));
  Real best = Real::from_long(0);
  for (auto& comp : comps) {
    const Real h = height_of_cycle(comp, d1, d2, samples, seed);
    best = max(best, Real::from_long(comp.multiplicity) * h / denom);
  }
  return best;
}

nlohmann::json to_json(const FiberAuditReport& r) {
  nlohmann::json j;
  j["epsilon"] = r.epsilon.get_str();
  j["seeds"] = {r.seed};
  j["thresholds"] = {{"multiplicity", r.entries.empty()
                                          ? mpq_class(0).get_str()
                                          : r.entries.front().threshold.get_str()}};
  j["all_pass"] = r.all_pass;
  j["caveat"] = r.caveat;
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& e : r.entries) {
    nlohmann::json ej;
    ej["factor"] = poly_to_json(e.component.factor, e.component.factor.degx(),
                                e.component.factor.degy());
    ej["mult"] = e.component.multiplicity;
    ej["shape"] = shape_name(e.component.shape);
    ej["height"] = e.component.height ? nlohmann::json(e.component.height->to_string())
                                      : nlohmann::json(nullptr);
    ej["exempt"] = e.exempt;
    ej["in_locus"] = e.in_locus;
    ej["threshold"] = e.threshold.get_str();
    ej["pass"] = e.pass;
    comps.push_back(std::move(ej));
  }
  j["components"] = std::move(comps);
  return j;
}

nlohmann::json to_json(const IndexTheoremReport& r) {
  nlohmann::json j;
  j["sup_grid"] = r.sup_grid;
  j["sup_trivial"] = r.sup_trivial.to_string();
  j["norm_target"] = r.norm_target.to_string();
  j["hyp_norm_estimate"] = r.hyp_norm_estimate;
  j["hyp_norm_rigorous"] = r.hyp_norm_rigorous;
  j["h1"] = r.h1.to_string();
  j["h2"] = r.h2.to_string();
  j["hyp_heights"] = r.hyp_heights;
  j["index_measured"] = r.index_measured.get_str();
  j["epsilon"] = r.epsilon.get_str();
  j["conclusion"] = r.conclusion;
  return j;
}

} // namespace tsd
