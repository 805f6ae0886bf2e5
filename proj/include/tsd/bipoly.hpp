#pragma once
// Dense bivariate polynomials over Z. The coefficient grid c[i][j] multiplies
// x^i y^j. These carry the sections of O(d1,d2) the project manipulates:
// divided derivatives, partial evaluation, exact division and certified
// interval evaluation all live here.
#include <vector>
#include <optional>
#include <string>
#include <gmpxx.h>
#include <json.hpp>
#include "tsd/poly.hpp"
#include "tsd/interval.hpp"

namespace tsd {

struct BiPoly {
  std::vector<std::vector<mpz_class>> c; // rectangular; c[i][j] on x^i y^j

  void normalize();
  bool is_zero() const { return c.empty(); }
  int degx() const { return static_cast<int>(c.size()) - 1; } // -1 if zero
  int degy() const { return c.empty() ? -1 : static_cast<int>(c[0].size()) - 1; }
  mpz_class coeff(int i, int j) const;
  void set_coeff(int i, int j, const mpz_class& v); // grows the grid as needed

  static BiPoly from_x(const ZPoly& f); // f(x) as a bivariate polynomial
  static BiPoly from_y(const ZPoly& f);
  static BiPoly monomial(int i, int j, const mpz_class& v = 1);
  static BiPoly constant(const mpz_class& v);

  bool operator==(const BiPoly& o) const;
};

BiPoly operator+(const BiPoly& a, const BiPoly& b);
BiPoly operator-(const BiPoly& a, const BiPoly& b);
BiPoly operator-(const BiPoly& a);
BiPoly operator*(const BiPoly& a, const BiPoly& b);
BiPoly operator*(const mpz_class& s, const BiPoly& a);

// views as univariate polynomials with univariate coefficients
std::vector<ZPoly> y_coefficients(const BiPoly& f); // [j] -> coeff of y^j in Z[x]
std::vector<ZPoly> x_coefficients(const BiPoly& f); // [i] -> coeff of x^i in Z[y]
BiPoly from_y_coefficients(const std::vector<ZPoly>& v);
BiPoly from_x_coefficients(const std::vector<ZPoly>& v);
BiPoly swap_variables(const BiPoly& f);

mpz_class eval_zz(const BiPoly& f, const mpz_class& x, const mpz_class& y);
mpq_class eval_qq(const BiPoly& f, const mpq_class& x, const mpq_class& y);
ZPoly eval_at_x(const BiPoly& f, const mpz_class& x); // result in Z[y]
ZPoly eval_at_y(const BiPoly& f, const mpz_class& y); // result in Z[x]
QPoly eval_at_x_q(const BiPoly& f, const mpq_class& x);
QPoly eval_at_y_q(const BiPoly& f, const mpq_class& y);
Complex eval_box(const BiPoly& f, const Complex& x, const Complex& y,
                 mpfr_prec_t prec = kDefaultPrec);
Real eval_box(const BiPoly& f, const Real& x, const Real& y,
              mpfr_prec_t prec = kDefaultPrec);

// divided derivative D^(i,j) f = (1/(i! j!)) d^(i+j) f / dx^i dy^j; integral
// on integer polynomials because the binomial factors absorb the factorials
BiPoly divided_derivative(const BiPoly& f, int i, int j);

// exact division in Z[x,y]; requires g primitive (Gauss: an integral f
// divisible over Q by primitive g has an integral quotient); nullopt when g
// does not divide f
std::optional<BiPoly> bi_divide_exact(const BiPoly& f, const BiPoly& g);

// pseudo-remainder with respect to y: the remainder of lc_y(g)^(degy f -
// degy g + 1) * f modulo g, coefficients in Z[x]
BiPoly pseudo_rem_y(const BiPoly& f, const BiPoly& g);

// content of f as a polynomial in y over Z[x]: the Z[x]-gcd of y-coefficients
ZPoly content_in_x(const BiPoly& f);
// content as a polynomial in x over Z[y]
ZPoly content_in_y(const BiPoly& f);
mpz_class integer_content(const BiPoly& f);

// number of nonzero coefficients and max |coefficient|
size_t term_count(const BiPoly& f);
mpz_class height_coeff(const BiPoly& f);

nlohmann::json bipoly_to_json(const BiPoly& f);
BiPoly bipoly_from_json(const nlohmann::json& j);
std::string bipoly_to_string(const BiPoly& f); // human-readable, sorted terms

} // namespace tsd
