#include "tsd/heights.hpp"

#include <stdexcept>

#include "tsd/factor.hpp"

namespace tsd {

namespace {

const mpq_class kHalf(1, 2);

Real half_log_of_mpq(const mpq_class& q, mpfr_prec_t prec) {
  return Real::from_mpq(kHalf, prec) * log_of_mpq(q, prec);
}

} // namespace

Place Place::at_prime(const mpz_class& p) {
  if (p < 2 || !is_probable_prime(p)) throw std::invalid_argument("place requires a prime");
  Place v;
  v.finite = true;
  v.prime = p;
  return v;
}

DivisorData DivisorData::make(const ZPoly& form, int deg) {
  if (form.is_zero()) throw ZeroPolynomial("divisor form is zero");
  ZPoly f = primitive_part(form);
  if (deg < 1 || deg < f.degree() || deg > f.degree() + 1)
    throw std::invalid_argument("divisor degree must be degree(form) or degree(form)+1");
  if (f.degree() >= 1 && gcd_z(f, derivative(f)).degree() != 0)
    throw std::invalid_argument("divisor form must be squarefree");
  return DivisorData{f, deg};
}

DivisorData DivisorData::from_algnum(const AlgebraicNumber& alpha) {
  return DivisorData{alpha.minpoly, alpha.degree()};
}

mpz_class DivisorData::value_at(const ProjPoint& p) const {
  return eval_homogeneous(form, deg, p.a, p.b);
}

PhiWeights PhiWeights::make(std::vector<std::pair<Place, mpq_class>> entries) {
  mpq_class total = 0;
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& [v, w] = entries[i];
    if (w < 0 || w > 1) throw std::invalid_argument("weight outside [0,1]");
    for (size_t j = 0; j < i; ++j)
      if (entries[j].first == v) throw std::invalid_argument("duplicate place");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("weights must sum to 1");
  return PhiWeights{std::move(entries)};
}

mpq_class PhiWeights::at(const Place& v) const {
  for (const auto& [place, w] : entries)
    if (place == v) return w;
  return 0;
}

Real fs_height(const ProjPoint& p, mpfr_prec_t prec) {
  return half_log_of_mpq(mpq_class(p.a * p.a + p.b * p.b), prec);
}

Real weil_local(const DivisorData& d, const Place& v, const ProjPoint& p, mpfr_prec_t prec) {
  mpz_class val = d.value_at(p);
  if (val == 0) throw PointOnDivisor("point lies on the divisor");
  if (v.finite) {
    mpz_class unit;
    unsigned long ord =
        mpz_remove(unit.get_mpz_t(), val.get_mpz_t(), v.prime.get_mpz_t());
    if (ord == 0) return Real();
    return Real::from_long(static_cast<long>(ord)) * log_of_mpq(mpq_class(v.prime), prec);
  }
  mpz_class nrm = p.a * p.a + p.b * p.b;
  mpz_class nrm_pow;
  mpz_pow_ui(nrm_pow.get_mpz_t(), nrm.get_mpz_t(), d.deg);
  return half_log_of_mpq(mpq_class(nrm_pow), prec) - log_of_mpq(mpq_class(abs(val)), prec);
}

Real weil_sum(const DivisorData& d, const ProjPoint& p, std::optional<long> prime_bound,
              mpfr_prec_t prec) {
  Real total = weil_local(d, Place::archimedean(), p, prec);
  mpz_class val = abs(d.value_at(p));
  for (const auto& [q, e] : factor_integer(val)) {
    if (prime_bound && q > *prime_bound) continue;
    total += Real::from_long(e) * log_of_mpq(mpq_class(q), prec);
  }
  return total;
}

mpz_class form_sup_bound(const DivisorData& d) {
  mpz_class s = 0;
  for (const auto& c : d.form.c) s += abs(c);
  return s;
}

TInvariant t_of_divisor(const DivisorData& d, mpfr_prec_t prec) {
  // the orbit height is constant on each irreducible component, so take the
  // factorwise values; a point-at-infinity component contributes height 0
  Rng rng(0x5e1f5eed);
  Real h; // [0,0]
  if (d.form.degree() >= 1) {
    ZFactorization fz = factor_z(d.form, rng);
    mpq_class width(mpz_class(1), mpz_class(1) << (prec / 2));
    Real one = Real::from_long(1);
    Real half = Real::from_mpq(kHalf, prec);
    for (const auto& [f, mult] : fz.factors) {
      Real sum = log_of_mpq(mpq_class(f.lc()), prec);
      for (const auto& box : isolate_all_roots(f, width))
        sum += half * log(one + abs_sq(box));
      Real hf = Real::from_mpq(mpq_class(1, f.degree()), prec) * sum;
      h = max(h, hf);
    }
  }
  Real one = Real::from_long(1);
  Real big_h = max(one, h);
  Real s = max(one, Real::from_long(2) * big_h + metric_comparison_constant(prec));
  return TInvariant{h, big_h, s, s * big_h};
}

Real approx_quality(const AlgebraicNumber& alpha, const ProjPoint& p, mpfr_prec_t prec) {
  if (p.b == 0) throw DivisionByZero("approximation exponent needs an affine point");
  mpz_class maxpq = std::max(abs(p.a), abs(p.b));
  if (maxpq == 1) throw DivisionByZero("approximation exponent needs max(|a|,|b|) > 1");
  mpq_class target = p.affine();
  mpq_class w(mpz_class(1), mpz_class(1) << 24);
  mpfr_prec_t wp = prec;
  for (int iter = 0; iter < 40; ++iter) {
    Complex box = refine_embedding(alpha, w);
    Complex diff(box.re - Real::from_mpq(target, wp), box.im);
    Real dist = abs_val(diff);
    if (!dist.contains_zero())
      return -log(dist) / log_of_mpq(mpq_class(maxpq), prec);
    w /= 1 << 12;
    wp += 64;
  }
  throw PrecisionExhausted("point is indistinguishable from the algebraic number");
}

Real metric_comparison_constant(mpfr_prec_t prec) {
  // both closed forms below equal 1/(1 + |z|^2) in the affine chart (see the
  // header for the local computation); the scan certifies the log-ratio on a
  // grid of |z|^2 values spanning several orders of magnitude
  Real one = Real::from_long(1);
  Real c0; // [0,0], the value at the points the grid misses is also 0
  for (int k = -12; k <= 12; ++k) {
    mpq_class zsq = k >= 0 ? mpq_class(mpz_class(1) << (2 * k))
                           : mpq_class(mpz_class(1), mpz_class(1) << (-2 * k));
    Real z2 = Real::from_mpq(zsq, prec);
    Real induced = one / (one + z2);        // conormal norm of d/dw from |s_diag|
    Real fs = one / (one + z2);             // Fubini-Study norm of b^2 at (z:1)
    c0 = hull(c0, log(induced / fs));
  }
  return c0;
}

Real h_omega(const ProjPoint& p, mpfr_prec_t prec) {
  return Real::from_long(-2) * fs_height(p, prec) + metric_comparison_constant(prec);
}

} // namespace tsd
