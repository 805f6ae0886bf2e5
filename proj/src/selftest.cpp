// Seeded invariant suite spanning every module; the CLI's selftest command
// is a thin wrapper around run_selftest.
#include "tsd/selftest.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "tsd/auxpoly.hpp"
#include "tsd/bipoly.hpp"
#include "tsd/blowup.hpp"
#include "tsd/heights.hpp"
#include "tsd/indexcheck.hpp"
#include "tsd/interval.hpp"
#include "tsd/lattice.hpp"
#include "tsd/numbers.hpp"
#include "tsd/util.hpp"

namespace tsd {
namespace {

void record(std::vector<SelftestResult>& out, const std::string& suite,
            const std::string& name, bool pass, const std::string& detail = "") {
  out.push_back(SelftestResult{suite, name, pass, pass ? "" : detail});
}

mpq_class random_mpq(Rng& rng) {
  const mpz_class num = rng.mpz_range(-1000, 1000);
  const mpz_class den = rng.mpz_range(1, 60);
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

Complex eval_on_box(const ZPoly& p, const Complex& z) {
  Complex acc = Complex::from_mpq(0, 0);
  for (size_t k = p.c.size(); k-- > 0;)
    acc = acc * z + Complex::from_mpq(mpq_class(p.c[k]), 0);
  return acc;
}

void suite_interval(std::vector<SelftestResult>& out, Rng& rng) {
  bool arith = true, sqrt_ok = true, explog = true;
  std::string detail;
  for (int t = 0; t < 40 && arith; ++t) {
    const mpq_class a = random_mpq(rng), b = random_mpq(rng);
    const Real ra = Real::from_mpq(a), rb = Real::from_mpq(b);
    arith = (ra + rb).contains(mpq_class(a + b)) &&
            (ra - rb).contains(mpq_class(a - b)) &&
            (ra * rb).contains(mpq_class(a * b));
    if (b != 0) arith = arith && (ra / rb).contains(mpq_class(a / b));
    if (!arith) detail = "a=" + a.get_str() + " b=" + b.get_str();
  }
  record(out, "interval", "field operations enclose the exact rationals",
         arith, detail);
  for (int t = 0; t < 20 && sqrt_ok; ++t) {
    const mpq_class a = random_mpq(rng);
    const Real r = sqrt(sqr(Real::from_mpq(a)));
    sqrt_ok = r.contains(mpq_class(abs(a)));
  }
  record(out, "interval", "sqrt(x^2) encloses |x|", sqrt_ok);
  for (int t = 0; t < 20 && explog; ++t) {
    mpq_class a = random_mpq(rng);
    a /= 100;
    explog = log(exp(Real::from_mpq(a))).contains(a);
  }
  record(out, "interval", "log(exp(x)) encloses x", explog);
}

void suite_factor(std::vector<SelftestResult>& out, Rng& rng) {
  bool ok = true;
  std::string detail;
  for (int t = 0; t < 25 && ok; ++t) {
    const mpz_class n = rng.mpz_range(2, mpz_class("1000000000000"));
    mpz_class prod = 1;
    for (const auto& [p, e] : factor_integer(n)) {
      mpz_class pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
      prod *= pe;
      int probab = mpz_probab_prime_p(p.get_mpz_t(), 30);
      ok = ok && probab > 0;
    }
    ok = ok && prod == n;
    if (!ok) detail = "n=" + n.get_str();
  }
  record(out, "factor", "factor_integer reassembles and factors are prime",
         ok, detail);
  bool pascal = true;
  for (int t = 0; t < 30 && pascal; ++t) {
    const long n = rng.range(2, 40), k = rng.range(1, n - 1);
    pascal = binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k);
  }
  record(out, "factor", "binomial satisfies the Pascal recurrence", pascal);
}

void suite_numbers(std::vector<SelftestResult>& out, Rng& rng) {
  const std::vector<ZPoly> polys = {ZPoly{-2, 0, 1}, ZPoly{-2, 0, 0, 1},
                                    ZPoly{1, 0, -16, 1}};
  bool count_ok = true, root_ok = true;
  for (const auto& m : polys) {
    const auto boxes = conjugate_boxes(m, mpq_class(1, 1000000));
    count_ok = count_ok && boxes.size() + 1 == m.c.size();
    for (const auto& b : boxes)
      root_ok = root_ok && eval_on_box(m, b).contains_zero();
  }
  record(out, "numbers", "conjugate boxes count the degree", count_ok);
  record(out, "numbers", "minimal polynomial vanishes on every root box",
         root_ok);
  bool field_ok = true;
  const AlgebraicNumber rt2 =
      AlgebraicNumber::nearest(ZPoly{-2, 0, 1}, 1.414, 0.0, rng);
  const AlgebraicNumber rt3 =
      AlgebraicNumber::nearest(ZPoly{-3, 0, 1}, 1.732, 0.0, rng);
  const Compositum comp = primitive_element(rt2, rt3, rng);
  field_ok = comp.gamma.degree() == 4;
  record(out, "numbers", "compositum of two real quadratics has degree 4",
         field_ok,
         "degree=" + std::to_string(comp.gamma.degree()));
}

void suite_heights(std::vector<SelftestResult>& out, Rng& rng) {
  const std::vector<DivisorData> divisors = {
      DivisorData::make(ZPoly{-2, 0, 1}, 2),    // a^2 - 2 b^2 homogenized
      DivisorData::make(ZPoly{-2, 0, 0, 1}, 3), // a^3 - 2 b^3
      DivisorData::from_algnum(AlgebraicNumber::from_rational(mpq_class(3, 2)))};
  bool ok = true;
  std::string detail;
  for (int t = 0; t < 15 && ok; ++t) {
    mpz_class a = rng.mpz_range(-500, 500), b = rng.mpz_range(-500, 500);
    if (a == 0 && b == 0) b = 1;
    const ProjPoint p = ProjPoint::make(a, b);
    for (const auto& d : divisors) {
      if (d.value_at(p) == 0) continue;
      const Real sum = weil_sum(d, p);
      const Real target = Real::from_long(d.deg) * fs_height(p);
      const Real diff = sum - target;
      ok = ok && diff.contains(mpq_class(0)) &&
           diff.width() < mpq_class(1, 1000000000);
      if (!ok)
        detail = "P=(" + p.a.get_str() + ":" + p.b.get_str() + ") diff=" +
                 diff.to_string(6);
    }
  }
  record(out, "heights", "product formula: sum of local terms equals deg * h",
         ok, detail);
  const Real c0 = metric_comparison_constant();
  record(out, "heights", "metric comparison constant is a tight zero window",
         c0.contains(mpq_class(0)) && c0.width() < mpq_class(1, 1000000),
         "c0=" + c0.to_string(6));
}

void suite_lattice(std::vector<SelftestResult>& out, Rng& rng) {
  bool kern_ok = true, siegel_ok = true;
  std::string detail;
  for (int t = 0; t < 10 && kern_ok; ++t) {
    // a random 2x4 system always has a nontrivial kernel
    IntegerMatrix m = IntegerMatrix::zero(2, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 4; ++j) m.at(i, j) = rng.mpz_range(-9, 9);
    std::vector<mpz_class> v;
    try {
      v = small_kernel_vector(m);
    } catch (const TrivialKernel&) {
      continue;
    }
    bool nonzero = false;
    for (const auto& z : v) nonzero = nonzero || z != 0;
    kern_ok = nonzero && in_kernel(m, v);
    if (kern_ok) {
      mpz_class c2 = 1;
      for (int i = 0; i < 2; ++i) {
        mpz_class row = 0;
        for (int j = 0; j < 4; ++j) row += m.at(i, j) * m.at(i, j);
        if (row > c2) c2 = row;
      }
      const Real c = sqrt(Real::from_mpq(mpq_class(c2)));
      const auto rep =
          verify_siegel(m, v, c, Real::from_long(0), Real::from_long(0));
      siegel_ok = siegel_ok && rep.ok;
      if (!rep.ok)
        detail = "lognorm=" + rep.lognorm.to_string(6) +
                 " bound=" + rep.bound.to_string(6);
    }
  }
  record(out, "lattice", "small_kernel_vector returns a nonzero kernel member",
         kern_ok);
  record(out, "lattice", "returned vectors satisfy the slope-method bound",
         siegel_ok, detail);
  const HermitianLattice std3 = HermitianLattice::standard(3);
  const Real lam = Real::from_mpq(mpq_class(7, 5));
  const Real shifted = arakelov_degree(twist(std3, lam));
  const Real expect = arakelov_degree(std3) + Real::from_long(3) * lam;
  record(out, "lattice", "twisting shifts the degree by rank * lambda",
         (shifted - expect).contains(mpq_class(0)));
}

void suite_auxpoly(std::vector<SelftestResult>& out, Rng& rng) {
  bool split_ok = true;
  for (int t = 0; t < 10 && split_ok; ++t) {
    const WeightSystem w =
        WeightSystem::make(mpq_class(rng.range(1, 3)), mpq_class(rng.range(1, 3)),
                           rng.range(1, 8), rng.range(1, 8),
                           mpq_class(rng.range(0, 4)));
    const auto below = staircase(w, StaircaseMode::below).members.size();
    const auto above = staircase(w, StaircaseMode::at_least).members.size();
    split_ok = below + above ==
               static_cast<size_t>((w.d1 + 1) * (w.d2 + 1));
  }
  record(out, "auxpoly", "below and at_least staircases partition the grid",
         split_ok);

  Rng rng2(rng.u64());
  const AlgebraicNumber rt2 =
      AlgebraicNumber::nearest(ZPoly{-2, 0, 1}, 1.414, 0.0, rng2);
  const WeightSystem w =
      WeightSystem::make(mpq_class(3, 2), mpq_class(3, 2), 4, 4, mpq_class(1));
  const auto [f, rep] = construct_auxiliary(rt2, rt2, w);
  const mpq_class idx =
      index_at(f, PointP1::finite(rt2), PointP1::finite(rt2), w);
  record(out, "auxpoly", "construction verifies its vanishing conditions",
         !f.is_zero() && rep.verified_conditions,
         "kernel_dim=" + std::to_string(rep.kernel_dim));
  record(out, "auxpoly", "constructed section has index >= delta at the target",
         idx >= w.delta, "index=" + idx.get_str());

  bool jet_ok = true;
  for (int t = 0; t < 10 && jet_ok; ++t) {
    BiPoly f2 = BiPoly::constant(0);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j)
        f2 = f2 + rng.mpz_range(-5, 5) * BiPoly::monomial(i, j);
    mpq_class x(rng.range(-3, 3), rng.range(1, 4));
    mpq_class y(rng.range(-3, 3), rng.range(1, 4));
    x.canonicalize();
    y.canonicalize();
    // divided Taylor expansion: f(x+u, y+v) = sum D^(i,j) f(x,y) u^i v^j
    mpq_class lhs = eval_qq(f2, mpq_class(x + mpq_class(1, 7)),
                            mpq_class(y + mpq_class(1, 11)));
    mpq_class rhs = 0;
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j <= 3; ++j) {
        mpq_class term = eval_qq(divided_derivative(f2, i, j), x, y);
        mpq_class ui, vj;
        mpz_class p7, p11;
        mpz_ui_pow_ui(p7.get_mpz_t(), 7, static_cast<unsigned long>(i));
        mpz_ui_pow_ui(p11.get_mpz_t(), 11, static_cast<unsigned long>(j));
        ui = mpq_class(1, p7);
        vj = mpq_class(1, p11);
        rhs += term * ui * vj;
      }
    jet_ok = lhs == rhs;
  }
  record(out, "auxpoly", "divided jets reproduce the Taylor expansion exactly",
         jet_ok);
}

void suite_indexcheck(std::vector<SelftestResult>& out, Rng& rng) {
  bool refactor_ok = true;
  for (int t = 0; t < 6 && refactor_ok; ++t) {
    const BiPoly x = BiPoly::from_x(ZPoly{0, 1});
    const BiPoly y = BiPoly::from_y(ZPoly{0, 1});
    // primitive with unit content, so the components reassemble up to sign
    BiPoly f = (x - y) * (x - y);
    f = f * BiPoly::from_x(ZPoly{mpz_class(rng.range(1, 4)), 1});
    const auto comps = factor_components(f);
    BiPoly prod = BiPoly::constant(1);
    for (const auto& c : comps) {
      if (c.shape == ComponentShape::point_support) continue;
      for (long k = 0; k < c.multiplicity; ++k) prod = prod * c.factor;
    }
    refactor_ok = (prod - f).is_zero() || (prod + f).is_zero();
  }
  record(out, "indexcheck", "component factorization reassembles the section",
         refactor_ok);
  const Real hp1 = height_projective_line();
  record(out, "indexcheck", "height of the line matches the closed form 1/2",
         hp1.contains(mpq_class(1, 2)) && hp1.width() < mpq_class(1, 10000));
}

void suite_blowup(std::vector<SelftestResult>& out, Rng& rng) {
  bool window_ok = true, finite_ok = true;
  std::string detail;
  for (int t = 0; t < 12 && window_ok && finite_ok; ++t) {
    const DivisorData d1 = DivisorData::make(ZPoly{-2, 0, 1}, 2);
    const DivisorData d2 =
        DivisorData::from_algnum(AlgebraicNumber::from_rational(
            mpq_class(rng.range(1, 9), rng.range(1, 9))));
    const ProjPoint p1 = ProjPoint::make(rng.mpz_range(2, 40), 1);
    const ProjPoint p2 = ProjPoint::make(rng.mpz_range(2, 40), 3);
    if (d1.value_at(p1) == 0 || d2.value_at(p2) == 0) continue;
    const WeightSystem w = WeightSystem::make(
        mpq_class(rng.range(1, 2)), mpq_class(rng.range(1, 2)),
        rng.range(2, 6), rng.range(2, 6), mpq_class(1));
    const auto rep = exceptional_degree_audit(
        p1, p2, d1, d2, w, mpq_class(1),
        {Place::archimedean(), Place::at_prime(2), Place::at_prime(7)});
    for (const auto& wit : rep.witnesses) {
      if (wit.v.finite) {
        // the witness generator achieves the minimum; same enclosure exactly
        finite_ok = finite_ok && wit.holds && wit.slack_c.is_exact_zero() &&
                    wit.lhs.lo_rational() == wit.rhs.lo_rational() &&
                    wit.lhs.hi_rational() == wit.rhs.hi_rational();
      } else {
        // window [min - C (d1+d2), min]
        const Real min_pair =
            wit.rhs + wit.slack_c * Real::from_long(w.d1 + w.d2);
        window_ok = window_ok && !wit.lhs.certainly_lt(wit.rhs) &&
                    !wit.lhs.certainly_gt(min_pair);
        if (!window_ok)
          detail = "lhs=" + wit.lhs.to_string(6) +
                   " window top=" + min_pair.to_string(6);
      }
    }
  }
  record(out, "blowup", "finite-place exceptional norm equals the minimum",
         finite_ok);
  record(out, "blowup",
         "archimedean exceptional norm sits in the half-log window",
         window_ok, detail);

  Rng rng2(7);
  const AlgebraicNumber rt2 =
      AlgebraicNumber::nearest(ZPoly{-2, 0, 1}, 1.414, 0.0, rng2);
  const Place inf = Place::archimedean();
  const Certificate c = certify_pair(
      rt2, rt2, ProjPoint::make(17, 12), ProjPoint::make(17, 12),
      mpq_class(21, 10), mpq_class(21, 10), mpq_class(41, 100), {inf},
      PhiWeights::make({{inf, 1}}));
  const auto doc = certificate_to_json(c);
  record(out, "blowup", "convergent pair certificate replays byte-for-byte",
         c.outcome == CertificateOutcome::hypothesis_violation &&
             certificate_replay(doc).dump() == doc.dump());
}

} // namespace

std::vector<SelftestResult> run_selftest(std::uint64_t seed) {
  std::vector<SelftestResult> out;
  Rng rng(seed);
  suite_interval(out, rng);
  suite_factor(out, rng);
  suite_numbers(out, rng);
  suite_heights(out, rng);
  suite_lattice(out, rng);
  suite_auxpoly(out, rng);
  suite_indexcheck(out, rng);
  suite_blowup(out, rng);
  return out;
}

bool all_pass(const std::vector<SelftestResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

} // namespace tsd
