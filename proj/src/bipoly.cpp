#include "tsd/bipoly.hpp"

#include <algorithm>
#include <sstream>

namespace tsd {

void BiPoly::normalize() {
  if (c.empty()) return;
  size_t w = 0;
  for (auto& row : c) {
    size_t k = row.size();
    while (k > 0 && row[k - 1] == 0) --k;
    w = std::max(w, k);
  }
  size_t h = c.size();
  while (h > 0) {
    bool all_zero = true;
    for (auto& v : c[h - 1])
      if (v != 0) {
        all_zero = false;
        break;
      }
    if (!all_zero) break;
    --h;
  }
  if (h == 0 || w == 0) {
    c.clear();
    return;
  }
  c.resize(h);
  for (auto& row : c) row.resize(w, 0);
}

mpz_class BiPoly::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i >= static_cast<int>(c.size())) return 0;
  if (j >= static_cast<int>(c[i].size())) return 0;
  return c[i][j];
}

void BiPoly::set_coeff(int i, int j, const mpz_class& v) {
  if (static_cast<int>(c.size()) <= i) {
    size_t w = c.empty() ? 0 : c[0].size();
    c.resize(i + 1, std::vector<mpz_class>(w, 0));
  }
  size_t w = std::max(c[0].size(), static_cast<size_t>(j + 1));
  for (auto& row : c) row.resize(w, 0);
  c[i][j] = v;
}

BiPoly BiPoly::from_x(const ZPoly& f) {
  BiPoly r;
  for (int i = 0; i <= f.degree(); ++i) r.set_coeff(i, 0, f.c[i]);
  r.normalize();
  return r;
}

BiPoly BiPoly::from_y(const ZPoly& f) {
  BiPoly r;
  for (int j = 0; j <= f.degree(); ++j) r.set_coeff(0, j, f.c[j]);
  r.normalize();
  return r;
}

BiPoly BiPoly::monomial(int i, int j, const mpz_class& v) {
  BiPoly r;
  r.set_coeff(i, j, v);
  r.normalize();
  return r;
}

BiPoly BiPoly::constant(const mpz_class& v) { return monomial(0, 0, v); }

bool BiPoly::operator==(const BiPoly& o) const { return c == o.c; }

BiPoly operator+(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  for (int i = 0; i <= b.degx(); ++i)
    for (int j = 0; j <= b.degy(); ++j)
      if (b.c[i][j] != 0) r.set_coeff(i, j, r.coeff(i, j) + b.c[i][j]);
  r.normalize();
  return r;
}

BiPoly operator-(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  for (int i = 0; i <= b.degx(); ++i)
    for (int j = 0; j <= b.degy(); ++j)
      if (b.c[i][j] != 0) r.set_coeff(i, j, r.coeff(i, j) - b.c[i][j]);
  r.normalize();
  return r;
}

BiPoly operator-(const BiPoly& a) {
  BiPoly r = a;
  for (auto& row : r.c)
    for (auto& v : row) v = -v;
  return r;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  int dx = a.degx() + b.degx(), dy = a.degy() + b.degy();
  r.c.assign(dx + 1, std::vector<mpz_class>(dy + 1, 0));
  for (int i = 0; i <= a.degx(); ++i)
    for (int j = 0; j <= a.degy(); ++j) {
      if (a.c[i][j] == 0) continue;
      for (int k = 0; k <= b.degx(); ++k)
        for (int l = 0; l <= b.degy(); ++l)
          if (b.c[k][l] != 0) r.c[i + k][j + l] += a.c[i][j] * b.c[k][l];
    }
  r.normalize();
  return r;
}

BiPoly operator*(const mpz_class& s, const BiPoly& a) {
  if (s == 0) return {};
  BiPoly r = a;
  for (auto& row : r.c)
    for (auto& v : row) v *= s;
  return r;
}

std::vector<ZPoly> y_coefficients(const BiPoly& f) {
  std::vector<ZPoly> out(f.degy() + 1);
  for (int j = 0; j <= f.degy(); ++j) {
    ZPoly p;
    p.c.resize(f.degx() + 1);
    for (int i = 0; i <= f.degx(); ++i) p.c[i] = f.c[i][j];
    p.normalize();
    out[j] = p;
  }
  return out;
}

std::vector<ZPoly> x_coefficients(const BiPoly& f) {
  std::vector<ZPoly> out(f.degx() + 1);
  for (int i = 0; i <= f.degx(); ++i) {
    ZPoly p;
    p.c = f.c[i];
    p.normalize();
    out[i] = p;
  }
  return out;
}

BiPoly from_y_coefficients(const std::vector<ZPoly>& v) {
  BiPoly r;
  for (size_t j = 0; j < v.size(); ++j)
    for (int i = 0; i <= v[j].degree(); ++i)
      if (v[j].c[i] != 0) r.set_coeff(i, static_cast<int>(j), v[j].c[i]);
  r.normalize();
  return r;
}

BiPoly from_x_coefficients(const std::vector<ZPoly>& v) {
  BiPoly r;
  for (size_t i = 0; i < v.size(); ++i)
    for (int j = 0; j <= v[i].degree(); ++j)
      if (v[i].c[j] != 0) r.set_coeff(static_cast<int>(i), j, v[i].c[j]);
  r.normalize();
  return r;
}

BiPoly swap_variables(const BiPoly& f) {
  BiPoly r;
  if (f.is_zero()) return r;
  r.c.assign(f.degy() + 1, std::vector<mpz_class>(f.degx() + 1, 0));
  for (int i = 0; i <= f.degx(); ++i)
    for (int j = 0; j <= f.degy(); ++j) r.c[j][i] = f.c[i][j];
  r.normalize();
  return r;
}

mpz_class eval_zz(const BiPoly& f, const mpz_class& x, const mpz_class& y) {
  mpz_class acc = 0;
  for (int i = f.degx(); i >= 0; --i) {
    mpz_class row = 0;
    for (int j = f.degy(); j >= 0; --j) row = row * y + f.c[i][j];
    acc = acc * x + row;
  }
  return acc;
}

mpq_class eval_qq(const BiPoly& f, const mpq_class& x, const mpq_class& y) {
  mpq_class acc = 0;
  for (int i = f.degx(); i >= 0; --i) {
    mpq_class row = 0;
    for (int j = f.degy(); j >= 0; --j) row = row * y + mpq_class(f.c[i][j]);
    acc = acc * x + row;
  }
  return acc;
}

ZPoly eval_at_x(const BiPoly& f, const mpz_class& x) {
  ZPoly r;
  if (f.is_zero()) return r;
  r.c.assign(f.degy() + 1, 0);
  auto xc = x_coefficients(f);
  mpz_class xp = 1;
  for (int i = 0; i <= f.degx(); ++i) {
    for (int j = 0; j <= xc[i].degree(); ++j) r.c[j] += xc[i].c[j] * xp;
    xp *= x;
  }
  r.normalize();
  return r;
}

ZPoly eval_at_y(const BiPoly& f, const mpz_class& y) {
  return eval_at_x(swap_variables(f), y);
}

QPoly eval_at_x_q(const BiPoly& f, const mpq_class& x) {
  QPoly r;
  if (f.is_zero()) return r;
  r.c.assign(f.degy() + 1, 0);
  auto xc = x_coefficients(f);
  mpq_class xp = 1;
  for (int i = 0; i <= f.degx(); ++i) {
    for (int j = 0; j <= xc[i].degree(); ++j) r.c[j] += mpq_class(xc[i].c[j]) * xp;
    xp *= x;
  }
  r.normalize();
  return r;
}

QPoly eval_at_y_q(const BiPoly& f, const mpq_class& y) {
  return eval_at_x_q(swap_variables(f), y);
}

Complex eval_box(const BiPoly& f, const Complex& x, const Complex& y, mpfr_prec_t prec) {
  Complex acc(Real::from_long(0), Real::from_long(0));
  for (int i = f.degx(); i >= 0; --i) {
    Complex row(Real::from_long(0), Real::from_long(0));
    for (int j = f.degy(); j >= 0; --j) {
      row = row * y;
      row.re = row.re + Real::from_mpz(f.c[i][j], prec);
    }
    acc = acc * x + row;
  }
  return acc;
}

Real eval_box(const BiPoly& f, const Real& x, const Real& y, mpfr_prec_t prec) {
  Real acc = Real::from_long(0);
  for (int i = f.degx(); i >= 0; --i) {
    Real row = Real::from_long(0);
    for (int j = f.degy(); j >= 0; --j)
      row = row * y + Real::from_mpz(f.c[i][j], prec);
    acc = acc * x + row;
  }
  return acc;
}

BiPoly divided_derivative(const BiPoly& f, int di, int dj) {
  BiPoly r;
  if (f.is_zero() || f.degx() < di || f.degy() < dj) return r;
  r.c.assign(f.degx() - di + 1, std::vector<mpz_class>(f.degy() - dj + 1, 0));
  for (int a = 0; a + di <= f.degx(); ++a)
    for (int b = 0; b + dj <= f.degy(); ++b)
      r.c[a][b] = binomial(a + di, di) * binomial(b + dj, dj) * f.c[a + di][b + dj];
  r.normalize();
  return r;
}

namespace {

// division in (Q[x])[y]: coefficients are univariate rationals, represented
// as QPoly; succeeds iff g divides f in Q[x,y]
std::optional<std::vector<QPoly>> divide_in_qx_y(const BiPoly& f, const BiPoly& g) {
  auto fy = y_coefficients(f);
  auto gy = y_coefficients(g);
  std::vector<QPoly> r(fy.size()), gq(gy.size());
  for (size_t j = 0; j < fy.size(); ++j) r[j] = q_from_z(fy[j]);
  for (size_t j = 0; j < gy.size(); ++j) gq[j] = q_from_z(gy[j]);
  int dg = static_cast<int>(gq.size()) - 1;
  while (dg >= 0 && gq[dg].is_zero()) --dg;
  if (dg < 0) return std::nullopt; // zero divisor
  int dr = static_cast<int>(r.size()) - 1;
  while (dr >= 0 && r[dr].is_zero()) --dr;
  std::vector<QPoly> q(dr >= dg ? dr - dg + 1 : 0);
  while (dr >= dg) {
    auto t = divide_exact_q(r[dr], gq[dg]);
    if (!t) return std::nullopt;
    q[dr - dg] = *t;
    for (int j = 0; j <= dg; ++j) {
      QPoly prod = *t * gq[j];
      r[dr - dg + j] = r[dr - dg + j] - prod;
    }
    if (!r[dr].is_zero()) return std::nullopt; // must cancel exactly
    --dr;
    while (dr >= 0 && r[dr].is_zero()) --dr;
  }
  if (dr >= 0) return std::nullopt; // remainder
  return q;
}

} // namespace

std::optional<BiPoly> bi_divide_exact(const BiPoly& f, const BiPoly& g) {
  if (g.is_zero()) throw ZeroPolynomial("bivariate division by zero");
  if (f.is_zero()) return BiPoly{};
  auto q = divide_in_qx_y(f, g);
  if (!q) return std::nullopt;
  std::vector<ZPoly> qz(q->size());
  for (size_t j = 0; j < q->size(); ++j) {
    mpz_class den;
    ZPoly num = z_from_q((*q)[j], &den);
    if (den != 1) return std::nullopt; // g was not primitive enough to divide
    qz[j] = num;
  }
  return from_y_coefficients(qz);
}

BiPoly pseudo_rem_y(const BiPoly& f, const BiPoly& g) {
  if (g.is_zero()) throw ZeroPolynomial("pseudo-remainder by zero");
  int dg = g.degy();
  BiPoly glc = BiPoly::from_x(y_coefficients(g).back());
  BiPoly r = f;
  int e = f.degy() - dg + 1;
  while (!r.is_zero() && r.degy() >= dg) {
    BiPoly rlc = BiPoly::from_x(y_coefficients(r).back());
    int k = r.degy() - dg;
    r = glc * r - rlc * g * BiPoly::monomial(0, k);
    --e;
  }
  if (e > 0 && !r.is_zero()) {
    BiPoly m = glc;
    for (int i = 1; i < e; ++i) m = m * glc;
    r = m * r;
  }
  return r;
}

ZPoly content_in_x(const BiPoly& f) {
  ZPoly g;
  for (auto& p : y_coefficients(f)) g = gcd_z(g, p);
  return g;
}

ZPoly content_in_y(const BiPoly& f) {
  ZPoly g;
  for (auto& p : x_coefficients(f)) g = gcd_z(g, p);
  return g;
}

mpz_class integer_content(const BiPoly& f) {
  mpz_class g = 0;
  for (auto& row : f.c)
    for (auto& v : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
  return g;
}

size_t term_count(const BiPoly& f) {
  size_t n = 0;
  for (auto& row : f.c)
    for (auto& v : row)
      if (v != 0) ++n;
  return n;
}

mpz_class height_coeff(const BiPoly& f) {
  mpz_class m = 0;
  for (auto& row : f.c)
    for (auto& v : row) {
      mpz_class a = abs(v);
      if (a > m) m = a;
    }
  return m;
}

nlohmann::json bipoly_to_json(const BiPoly& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (int i = 0; i <= f.degx(); ++i)
    for (int j = 0; j <= f.degy(); ++j)
      if (f.c[i][j] != 0)
        terms.push_back({{"i", i}, {"j", j}, {"c", f.c[i][j].get_str()}});
  return {{"degx", f.degx()}, {"degy", f.degy()}, {"terms", terms}};
}

BiPoly bipoly_from_json(const nlohmann::json& j) {
  BiPoly r;
  for (auto& t : j.at("terms"))
    r.set_coeff(t.at("i").get<int>(), t.at("j").get<int>(),
                mpz_class(t.at("c").get<std::string>()));
  r.normalize();
  return r;
}

std::string bipoly_to_string(const BiPoly& f) {
  if (f.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = f.degx(); i >= 0; --i)
    for (int j = f.degy(); j >= 0; --j) {
      const mpz_class& v = f.c[i][j];
      if (v == 0) continue;
      if (!first) os << (v > 0 ? " + " : " - ");
      else if (v < 0) os << "-";
      first = false;
      mpz_class a = abs(v);
      bool unit = (a == 1) && (i > 0 || j > 0);
      if (!unit) os << a.get_str();
      if (i > 0) os << (unit ? "" : "*") << "x" << (i > 1 ? "^" + std::to_string(i) : "");
      if (j > 0) os << ((i > 0 || !unit) ? "*" : "") << "y" << (j > 1 ? "^" + std::to_string(j) : "");
    }
  return os.str();
}

} // namespace tsd
