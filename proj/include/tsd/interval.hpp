#pragma once
// Certified real intervals on MPFR endpoints with outward rounding, plus
// rectangular complex boxes. Every archimedean quantity in the project flows
// through these types; exact data stays in GMP until the last moment.
#include <mpfr.h>
#include <gmpxx.h>
#include <string>
#include <functional>
#include "tsd/util.hpp"

namespace tsd {

// Refinement budget: comparisons refine by recomputation at doubled precision;
// after this many doublings-equivalent of work we give up (PrecisionExhausted).
inline constexpr int kMaxPrecisionBits = 1 << 20; // ~10^6 bisection steps worth
inline constexpr mpfr_prec_t kDefaultPrec = 128;

class Real {
public:
  Real();                          // [0,0]
  Real(const Real&);
  Real(Real&&) noexcept;
  Real& operator=(const Real&);
  Real& operator=(Real&&) noexcept;
  ~Real();

  static Real from_long(long v);
  static Real from_mpz(const mpz_class& z, mpfr_prec_t prec = kDefaultPrec);
  static Real from_mpq(const mpq_class& q, mpfr_prec_t prec = kDefaultPrec);
  static Real from_endpoints(const mpfr_t lo, const mpfr_t hi);
  static Real whole(double lo, double hi); // quick literal box (exact doubles)

  mpfr_prec_t prec() const { return prec_; }
  const mpfr_t& lo() const { return lo_; }
  const mpfr_t& hi() const { return hi_; }

  bool is_point() const;
  bool contains_zero() const;
  bool is_positive() const;   // certainly > 0
  bool is_negative() const;   // certainly < 0
  int  certain_sign() const;  // -1, 0 (=indeterminate or exact zero), +1
  bool is_exact_zero() const;

  double mid_double() const;
  mpq_class width() const;            // exact hi - lo as a rational
  mpq_class lo_rational() const;
  mpq_class hi_rational() const;

  // midpoint with `digits` significant digits, fixed scientific format
  std::string to_string(int digits = 15) const;
  std::string width_string() const;   // width in %.2e format ("0" if exact)

  friend Real operator+(const Real&, const Real&);
  friend Real operator-(const Real&, const Real&);
  friend Real operator-(const Real&);
  friend Real operator*(const Real&, const Real&);
  friend Real operator/(const Real&, const Real&); // divisor must exclude 0
  Real& operator+=(const Real& o) { *this = *this + o; return *this; }
  Real& operator-=(const Real& o) { *this = *this - o; return *this; }
  Real& operator*=(const Real& o) { *this = *this * o; return *this; }

  friend Real sqr(const Real&);       // tight square (handles 0-straddling)
  friend Real abs(const Real&);
  friend Real sqrt(const Real&);      // argument clamped at 0 from below
  friend Real log(const Real&);       // argument must be certainly > 0
  friend Real exp(const Real&);
  friend Real pow_ui(const Real&, unsigned long);
  friend Real hull(const Real&, const Real&);
  friend Real min(const Real&, const Real&);
  friend Real max(const Real&, const Real&);

  // comparisons that are certain (true only if provable from the enclosure)
  bool certainly_le(const Real& o) const;
  bool certainly_lt(const Real& o) const;
  bool certainly_ge(const Real& o) const { return o.certainly_le(*this); }
  bool certainly_gt(const Real& o) const { return o.certainly_lt(*this); }
  bool overlaps(const Real& o) const;
  bool contains(const mpq_class& q) const;

private:
  explicit Real(mpfr_prec_t prec);
  void set_prec_destructive(mpfr_prec_t prec);
  mpfr_t lo_, hi_;
  mpfr_prec_t prec_;
};

Real log_of_mpq(const mpq_class& q, mpfr_prec_t prec = kDefaultPrec); // q > 0
Real log_of_ulong(unsigned long v, mpfr_prec_t prec = kDefaultPrec);

// Evaluate `f(prec)` at doubling precision until the result's width is at most
// `target`. Every certified scalar the library reports goes through here.
Real refine_to_width(const std::function<Real(mpfr_prec_t)>& f,
                     const mpq_class& target,
                     mpfr_prec_t start = kDefaultPrec);

// Decide sign of f's limit: refine until the interval excludes zero or the
// exact-zero witness returns true. (Exactness must come from the caller, e.g.
// "the polynomial value at this rational is exactly zero".)
int decide_sign(const std::function<Real(mpfr_prec_t)>& f,
                const std::function<bool()>& exactly_zero,
                mpfr_prec_t start = kDefaultPrec);

struct Complex {
  Real re, im;
  Complex() = default;
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  static Complex from_mpq(const mpq_class& r, const mpq_class& i, mpfr_prec_t prec = kDefaultPrec) {
    return Complex(Real::from_mpq(r, prec), Real::from_mpq(i, prec));
  }
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
};

Complex operator+(const Complex&, const Complex&);
Complex operator-(const Complex&, const Complex&);
Complex operator*(const Complex&, const Complex&);
Complex operator*(const Real&, const Complex&);
Complex operator/(const Complex&, const Complex&); // divisor box must exclude 0
Real abs_sq(const Complex&);
Real abs_val(const Complex&);
bool disjoint(const Complex& a, const Complex& b);

} // namespace tsd
