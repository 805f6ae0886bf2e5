#include "tsd/interval.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

namespace tsd {

Real::Real() : Real(kDefaultPrec) {
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Real::Real(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
}

Real::Real(const Real& o) : Real(o.prec_) {
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Real::Real(Real&& o) noexcept : prec_(o.prec_) {
  // steal the mpfr guts; leave o valid (freshly initialized)
  lo_[0] = o.lo_[0];
  hi_[0] = o.hi_[0];
  mpfr_init2(o.lo_, o.prec_);
  mpfr_init2(o.hi_, o.prec_);
  mpfr_set_zero(o.lo_, 1);
  mpfr_set_zero(o.hi_, 1);
}

Real& Real::operator=(const Real& o) {
  if (this == &o) return *this;
  if (prec_ != o.prec_) {
    mpfr_set_prec(lo_, o.prec_);
    mpfr_set_prec(hi_, o.prec_);
    prec_ = o.prec_;
  }
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this == &o) return *this;
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  std::swap(prec_, o.prec_);
  return *this;
}

Real::~Real() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Real Real::from_long(long v) {
  Real r(kDefaultPrec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Real Real::from_mpz(const mpz_class& z, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_z(r.lo_, z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, z.get_mpz_t(), MPFR_RNDU);
  return r;
}

Real Real::from_mpq(const mpq_class& q, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Real Real::from_endpoints(const mpfr_t lo, const mpfr_t hi) {
  mpfr_prec_t p = std::max(mpfr_get_prec(lo), mpfr_get_prec(hi));
  Real r(p);
  mpfr_set(r.lo_, lo, MPFR_RNDD);
  mpfr_set(r.hi_, hi, MPFR_RNDU);
  return r;
}

Real Real::whole(double lo, double hi) {
  Real r(kDefaultPrec);
  mpfr_set_d(r.lo_, lo, MPFR_RNDD);
  mpfr_set_d(r.hi_, hi, MPFR_RNDU);
  return r;
}

bool Real::is_point() const { return mpfr_equal_p(lo_, hi_); }
bool Real::contains_zero() const {
  return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0;
}
bool Real::is_positive() const { return mpfr_sgn(lo_) > 0; }
bool Real::is_negative() const { return mpfr_sgn(hi_) < 0; }
int Real::certain_sign() const {
  if (is_positive()) return 1;
  if (is_negative()) return -1;
  return 0;
}
bool Real::is_exact_zero() const {
  return mpfr_zero_p(lo_) && mpfr_zero_p(hi_);
}

double Real::mid_double() const {
  mpfr_t m;
  mpfr_init2(m, 64);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

mpq_class Real::width() const {
  mpq_class a = lo_rational(), b = hi_rational();
  return b - a;
}

static mpq_class mpfr_to_mpq(const mpfr_t x) {
  if (mpfr_zero_p(x)) return 0;
  mpq_t q;
  mpq_init(q);
  mpfr_get_q(q, x);
  mpq_class r(q);
  mpq_clear(q);
  return r;
}

mpq_class Real::lo_rational() const { return mpfr_to_mpq(lo_); }
mpq_class Real::hi_rational() const { return mpfr_to_mpq(hi_); }

std::string Real::to_string(int digits) const {
  mpfr_t m;
  mpfr_init2(m, std::max<mpfr_prec_t>(prec_, 64));
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  char buf[128];
  std::string fmt = "%." + std::to_string(digits - 1) + "Re";
  mpfr_snprintf(buf, sizeof buf, fmt.c_str(), m);
  mpfr_clear(m);
  return buf;
}

std::string Real::width_string() const {
  if (is_point()) return "0";
  mpfr_t w;
  mpfr_init2(w, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.2Re", w);
  mpfr_clear(w);
  return buf;
}

static mpfr_prec_t join_prec(const Real& a, const Real& b) {
  return std::max(a.prec(), b.prec());
}

Real operator+(const Real& a, const Real& b) {
  Real r = Real::from_long(0);
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi;
  mpfr_init2(lo, p); mpfr_init2(hi, p);
  mpfr_add(lo, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(hi, a.hi(), b.hi(), MPFR_RNDU);
  r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi;
  mpfr_init2(lo, p); mpfr_init2(hi, p);
  mpfr_sub(lo, a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(hi, a.hi(), b.lo(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real operator-(const Real& a) {
  mpfr_t lo, hi;
  mpfr_init2(lo, a.prec()); mpfr_init2(hi, a.prec());
  mpfr_neg(lo, a.hi(), MPFR_RNDD);
  mpfr_neg(hi, a.lo(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi, t;
  mpfr_init2(lo, p); mpfr_init2(hi, p); mpfr_init2(t, p);
  // lo = min over the four endpoint products rounded down
  mpfr_mul(lo, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_mul(t, a.lo(), b.hi(), MPFR_RNDD); mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_mul(t, a.hi(), b.lo(), MPFR_RNDD); mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_mul(t, a.hi(), b.hi(), MPFR_RNDD); mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_mul(hi, a.lo(), b.lo(), MPFR_RNDU);
  mpfr_mul(t, a.lo(), b.hi(), MPFR_RNDU); mpfr_max(hi, hi, t, MPFR_RNDU);
  mpfr_mul(t, a.hi(), b.lo(), MPFR_RNDU); mpfr_max(hi, hi, t, MPFR_RNDU);
  mpfr_mul(t, a.hi(), b.hi(), MPFR_RNDU); mpfr_max(hi, hi, t, MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi); mpfr_clear(t);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  if (b.contains_zero()) throw DivisionByZero("interval division by zero-straddling divisor");
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi, t;
  mpfr_init2(lo, p); mpfr_init2(hi, p); mpfr_init2(t, p);
  mpfr_div(lo, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_div(t, a.lo(), b.hi(), MPFR_RNDD); mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_div(t, a.hi(), b.lo(), MPFR_RNDD); mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_div(t, a.hi(), b.hi(), MPFR_RNDD); mpfr_min(lo, lo, t, MPFR_RNDD);
  mpfr_div(hi, a.lo(), b.lo(), MPFR_RNDU);
  mpfr_div(t, a.lo(), b.hi(), MPFR_RNDU); mpfr_max(hi, hi, t, MPFR_RNDU);
  mpfr_div(t, a.hi(), b.lo(), MPFR_RNDU); mpfr_max(hi, hi, t, MPFR_RNDU);
  mpfr_div(t, a.hi(), b.hi(), MPFR_RNDU); mpfr_max(hi, hi, t, MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi); mpfr_clear(t);
  return r;
}

Real sqr(const Real& a) {
  mpfr_t lo, hi, t;
  mpfr_init2(lo, a.prec()); mpfr_init2(hi, a.prec()); mpfr_init2(t, a.prec());
  if (a.contains_zero()) {
    mpfr_set_zero(lo, 1);
    mpfr_sqr(hi, a.lo(), MPFR_RNDU);
    mpfr_sqr(t, a.hi(), MPFR_RNDU);
    mpfr_max(hi, hi, t, MPFR_RNDU);
  } else if (a.is_positive()) {
    mpfr_sqr(lo, a.lo(), MPFR_RNDD);
    mpfr_sqr(hi, a.hi(), MPFR_RNDU);
  } else {
    mpfr_sqr(lo, a.hi(), MPFR_RNDD);
    mpfr_sqr(hi, a.lo(), MPFR_RNDU);
  }
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi); mpfr_clear(t);
  return r;
}

Real abs(const Real& a) {
  if (a.is_positive() || a.is_exact_zero()) return a;
  if (a.is_negative()) return -a;
  mpfr_t lo, hi, t;
  mpfr_init2(lo, a.prec()); mpfr_init2(hi, a.prec()); mpfr_init2(t, a.prec());
  mpfr_set_zero(lo, 1);
  mpfr_abs(hi, a.lo(), MPFR_RNDU);
  mpfr_abs(t, a.hi(), MPFR_RNDU);
  mpfr_max(hi, hi, t, MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi); mpfr_clear(t);
  return r;
}

Real sqrt(const Real& a) {
  mpfr_t lo, hi;
  mpfr_init2(lo, a.prec()); mpfr_init2(hi, a.prec());
  if (mpfr_sgn(a.lo()) < 0) mpfr_set_zero(lo, 1);
  else mpfr_sqrt(lo, a.lo(), MPFR_RNDD);
  mpfr_sqrt(hi, a.hi(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real log(const Real& a) {
  if (!a.is_positive()) throw DivisionByZero("log of interval not certainly positive");
  mpfr_t lo, hi;
  mpfr_init2(lo, a.prec()); mpfr_init2(hi, a.prec());
  mpfr_log(lo, a.lo(), MPFR_RNDD);
  mpfr_log(hi, a.hi(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real exp(const Real& a) {
  mpfr_t lo, hi;
  mpfr_init2(lo, a.prec()); mpfr_init2(hi, a.prec());
  mpfr_exp(lo, a.lo(), MPFR_RNDD);
  mpfr_exp(hi, a.hi(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real pow_ui(const Real& a, unsigned long e) {
  Real acc = Real::from_long(1);
  Real base = a;
  while (e) {
    if (e & 1) acc = acc * base;
    base = sqr(base);
    e >>= 1;
  }
  return acc;
}

Real hull(const Real& a, const Real& b) {
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi;
  mpfr_init2(lo, p); mpfr_init2(hi, p);
  mpfr_min(lo, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(hi, a.hi(), b.hi(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real min(const Real& a, const Real& b) {
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi;
  mpfr_init2(lo, p); mpfr_init2(hi, p);
  mpfr_min(lo, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_min(hi, a.hi(), b.hi(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real max(const Real& a, const Real& b) {
  mpfr_prec_t p = join_prec(a, b);
  mpfr_t lo, hi;
  mpfr_init2(lo, p); mpfr_init2(hi, p);
  mpfr_max(lo, a.lo(), b.lo(), MPFR_RNDD);
  mpfr_max(hi, a.hi(), b.hi(), MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

bool Real::certainly_le(const Real& o) const { return mpfr_lessequal_p(hi_, o.lo_); }
bool Real::certainly_lt(const Real& o) const { return mpfr_less_p(hi_, o.lo_); }
bool Real::overlaps(const Real& o) const {
  return !(mpfr_less_p(hi_, o.lo_) || mpfr_less_p(o.hi_, lo_));
}
bool Real::contains(const mpq_class& q) const {
  Real p = Real::from_mpq(q, prec_ + 8);
  return mpfr_lessequal_p(lo_, p.hi()) && mpfr_lessequal_p(p.lo(), hi_);
}

Real log_of_mpq(const mpq_class& q, mpfr_prec_t prec) {
  if (sgn(q) <= 0) throw DivisionByZero("log of nonpositive rational");
  mpfr_t lo, hi;
  mpfr_init2(lo, prec); mpfr_init2(hi, prec);
  mpfr_set_q(lo, q.get_mpq_t(), MPFR_RNDD);
  mpfr_log(lo, lo, MPFR_RNDD);
  mpfr_set_q(hi, q.get_mpq_t(), MPFR_RNDU);
  mpfr_log(hi, hi, MPFR_RNDU);
  Real r = Real::from_endpoints(lo, hi);
  mpfr_clear(lo); mpfr_clear(hi);
  return r;
}

Real log_of_ulong(unsigned long v, mpfr_prec_t prec) {
  return log_of_mpq(mpq_class(static_cast<long>(v)), prec);
}

Real refine_to_width(const std::function<Real(mpfr_prec_t)>& f,
                     const mpq_class& target,
                     mpfr_prec_t start) {
  mpfr_prec_t p = start;
  Real r = f(p);
  while (r.width() > target) {
    if (p > kMaxPrecisionBits)
      throw PrecisionExhausted("refine_to_width: budget exceeded at precision " + std::to_string(p));
    p *= 2;
    r = f(p);
  }
  return r;
}

int decide_sign(const std::function<Real(mpfr_prec_t)>& f,
                const std::function<bool()>& exactly_zero,
                mpfr_prec_t start) {
  mpfr_prec_t p = start;
  for (;;) {
    Real r = f(p);
    int s = r.certain_sign();
    if (s != 0) return s;
    if (exactly_zero()) return 0;
    if (p > kMaxPrecisionBits)
      throw PrecisionExhausted("decide_sign: budget exceeded");
    p *= 2;
  }
}

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator*(const Real& s, const Complex& a) { return {s * a.re, s * a.im}; }
Complex operator/(const Complex& a, const Complex& b) {
  Real d = abs_sq(b);
  if (d.contains_zero()) throw DivisionByZero("complex interval division by box containing 0");
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
Real abs_sq(const Complex& a) { return sqr(a.re) + sqr(a.im); }
Real abs_val(const Complex& a) { return sqrt(abs_sq(a)); }
bool disjoint(const Complex& a, const Complex& b) {
  return !a.re.overlaps(b.re) || !a.im.overlaps(b.im);
}

} // namespace tsd
