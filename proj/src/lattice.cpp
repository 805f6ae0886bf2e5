#include "tsd/lattice.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace tsd {

namespace {

using Mat = std::vector<std::vector<mpz_class>>;
using QMat = std::vector<std::vector<mpq_class>>;

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

mpz_class exact_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

int cmpabs(const mpz_class& a, const mpz_class& b) {
  return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}

void check_square_symmetric(const QMat& gram) {
  size_t n = gram.size();
  if (n == 0) throw std::invalid_argument("gram matrix is empty");
  for (const auto& row : gram)
    if (row.size() != n) throw std::invalid_argument("gram matrix is not square");
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (gram[i][j] != gram[j][i]) throw std::invalid_argument("gram matrix is not symmetric");
}

// clear denominators: returns the common denominator, fills the scaled matrix
mpz_class scale_to_integers(const QMat& gram, Mat& out) {
  mpz_class den = 1;
  for (const auto& row : gram)
    for (const auto& e : row) den = lcm(den, e.get_den());
  out.assign(gram.size(), std::vector<mpz_class>(gram.size()));
  for (size_t i = 0; i < gram.size(); ++i)
    for (size_t j = 0; j < gram.size(); ++j) {
      mpq_class s = mpq_class(den) * gram[i][j];
      out[i][j] = s.get_num();
    }
  return den;
}

mpq_class det_rational(const QMat& gram) {
  Mat m;
  mpz_class den = scale_to_integers(gram, m);
  mpz_class dz = det_bareiss(std::move(m));
  mpz_class dn;
  mpz_pow_ui(dn.get_mpz_t(), den.get_mpz_t(), gram.size());
  mpq_class d(dz, dn);
  d.canonicalize();
  return d;
}

// ---------------------------------------------------------------- mod p ----

constexpr unsigned long kP61 = 2305843009213693951ul; // 2^61 - 1

inline unsigned long mulmod(unsigned long a, unsigned long b, unsigned long p) {
  return (unsigned long)((unsigned __int128)a * b % p);
}

inline unsigned long submod(unsigned long a, unsigned long b, unsigned long p) {
  return a >= b ? a - b : a + p - b;
}

unsigned long powmod(unsigned long a, unsigned long e, unsigned long p) {
  unsigned long r = 1 % p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

unsigned long invmod(unsigned long a, unsigned long p) { return powmod(a % p, p - 2, p); }

inline unsigned long mod_of(const mpz_class& z, unsigned long p) {
  return mpz_fdiv_ui(z.get_mpz_t(), p);
}

struct ModEchelon {
  int rank = 0;
  std::vector<int> pivot_rows; // original row indices, one per pivot
  std::vector<int> pivot_cols;
  std::vector<int> free_cols;
};

ModEchelon echelon_mod_p(const IntegerMatrix& m, unsigned long p) {
  int r = m.rows, c = m.cols;
  std::vector<std::vector<unsigned long>> w(r, std::vector<unsigned long>(c));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) w[i][j] = mod_of(m.a[i][j], p);
  std::vector<int> orig(r);
  std::iota(orig.begin(), orig.end(), 0);
  ModEchelon res;
  int row = 0;
  for (int col = 0; col < c; ++col) {
    int piv = -1;
    for (int i = row; i < r; ++i)
      if (w[i][col] != 0) { piv = i; break; }
    if (piv < 0) {
      res.free_cols.push_back(col);
      continue;
    }
    std::swap(w[piv], w[row]);
    std::swap(orig[piv], orig[row]);
    unsigned long inv = invmod(w[row][col], p);
    for (int j = col; j < c; ++j) w[row][j] = mulmod(w[row][j], inv, p);
    for (int i = row + 1; i < r; ++i) {
      unsigned long f = w[i][col];
      if (!f) continue;
      for (int j = col; j < c; ++j) w[i][j] = submod(w[i][j], mulmod(f, w[row][j], p), p);
    }
    res.pivot_rows.push_back(orig[row]);
    res.pivot_cols.push_back(col);
    ++row;
    if (row == r) {
      for (int j = col + 1; j < c; ++j) res.free_cols.push_back(j);
      break;
    }
  }
  res.rank = row;
  return res;
}

struct LuModP {
  unsigned long p = 0;
  int n = 0;
  std::vector<std::vector<unsigned long>> lu; // unit L strictly below, U on/above
  std::vector<int> perm;
};

bool lu_mod_p(const Mat& a, unsigned long p, LuModP& out) {
  int n = (int)a.size();
  out.p = p;
  out.n = n;
  out.lu.assign(n, std::vector<unsigned long>(n));
  out.perm.resize(n);
  std::iota(out.perm.begin(), out.perm.end(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.lu[i][j] = mod_of(a[i][j], p);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (out.lu[i][k] != 0) { piv = i; break; }
    if (piv < 0) return false;
    std::swap(out.lu[piv], out.lu[k]);
    std::swap(out.perm[piv], out.perm[k]);
    unsigned long inv = invmod(out.lu[k][k], p);
    for (int i = k + 1; i < n; ++i) {
      unsigned long f = mulmod(out.lu[i][k], inv, p);
      out.lu[i][k] = f;
      if (!f) continue;
      for (int j = k + 1; j < n; ++j)
        out.lu[i][j] = submod(out.lu[i][j], mulmod(f, out.lu[k][j], p), p);
    }
  }
  return true;
}

std::vector<unsigned long> lu_solve(const LuModP& f, const std::vector<unsigned long>& b) {
  int n = f.n;
  std::vector<unsigned long> y(n);
  for (int i = 0; i < n; ++i) {
    unsigned long s = b[f.perm[i]] % f.p;
    for (int j = 0; j < i; ++j) s = submod(s, mulmod(f.lu[i][j], y[j], f.p), f.p);
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    unsigned long s = y[i];
    for (int j = i + 1; j < n; ++j) s = submod(s, mulmod(f.lu[i][j], y[j], f.p), f.p);
    y[i] = mulmod(s, invmod(f.lu[i][i], f.p), f.p);
  }
  return y;
}

// ------------------------------------------------- rational reconstruction

bool rat_reconstruct(const mpz_class& u0, const mpz_class& m, mpq_class& out) {
  mpz_class bound;
  mpz_class half = (m - 1) / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = u0 % m;
  if (r1 < 0) r1 += m;
  mpz_class t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    mpz_class t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (t1 == 0) return false;
  if (t1 < 0) { t1 = -t1; r1 = -r1; }
  if (cmp(t1, bound) > 0) return false;
  if (gcd(r1, t1) != 1) return false;
  out = mpq_class(r1, t1);
  out.canonicalize();
  return true;
}

// solves a*y = b exactly via p-adic lifting; false on reconstruction failure
bool dixon_solve(const Mat& a, const LuModP& f, const std::vector<mpz_class>& b,
                 std::vector<mpq_class>& out) {
  int n = f.n;
  unsigned long p = f.p;
  // lift far enough for numerators bounded by Hadamard(a) * ||b|| and
  // denominators by Hadamard(a)
  double log2h = 0.0;
  for (int j = 0; j < n; ++j) {
    mpz_class colsq = 0;
    for (int i = 0; i < n; ++i) colsq += a[i][j] * a[i][j];
    log2h += 0.5 * (double)mpz_sizeinbase(colsq.get_mpz_t(), 2);
  }
  mpz_class bsq = 0;
  for (const auto& e : b) bsq += e * e;
  double log2b = bsq == 0 ? 0.0 : 0.5 * (double)mpz_sizeinbase(bsq.get_mpz_t(), 2);
  long steps = (long)((2.0 * (log2h + log2b) + 8.0) / 60.0) + 2;

  std::vector<mpz_class> x(n, 0), r = b;
  mpz_class pk = 1;
  std::vector<unsigned long> rm(n);
  for (long s = 0; s < steps; ++s) {
    for (int i = 0; i < n; ++i) rm[i] = mod_of(r[i], p);
    std::vector<unsigned long> xi = lu_solve(f, rm);
    for (int i = 0; i < n; ++i)
      if (xi[i]) x[i] += pk * mpz_class(xi[i]);
    for (int i = 0; i < n; ++i) {
      mpz_class acc = r[i];
      for (int j = 0; j < n; ++j)
        if (xi[j]) acc -= a[i][j] * mpz_class(xi[j]);
      r[i] = exact_div(acc, mpz_class(p));
    }
    pk *= p;
  }
  out.assign(n, 0);
  for (int i = 0; i < n; ++i)
    if (!rat_reconstruct(x[i], pk, out[i])) return false;
  // exact verification with cleared denominators
  mpz_class den = 1;
  for (const auto& e : out) den = lcm(den, e.get_den());
  std::vector<mpz_class> z(n);
  for (int i = 0; i < n; ++i) z[i] = mpq_class(mpq_class(den) * out[i]).get_num();
  for (int i = 0; i < n; ++i) {
    mpz_class acc = 0;
    for (int j = 0; j < n; ++j) acc += a[i][j] * z[j];
    if (acc != den * b[i]) return false;
  }
  return true;
}

void make_primitive(std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& e : v) g = gcd(g, e);
  if (g > 1)
    for (auto& e : v) e = exact_div(e, g);
}

// basis of the row lattice generated by the rows (unimodular row reduction,
// zero rows dropped)
Mat row_lattice_basis(Mat v) {
  int nr = (int)v.size();
  if (nr == 0) return v;
  int nc = (int)v[0].size();
  int row = 0;
  for (int col = 0; col < nc && row < nr; ++col) {
    while (true) {
      int piv = -1;
      for (int i = row; i < nr; ++i)
        if (v[i][col] != 0 && (piv < 0 || cmpabs(v[i][col], v[piv][col]) < 0)) piv = i;
      if (piv < 0) break;
      std::swap(v[piv], v[row]);
      bool clean = true;
      for (int i = row + 1; i < nr; ++i) {
        if (v[i][col] == 0) continue;
        mpz_class q = floor_div(v[i][col], v[row][col]);
        if (q != 0)
          for (int j = 0; j < nc; ++j) v[i][j] -= q * v[row][j];
        if (v[i][col] != 0) clean = false;
      }
      if (clean) { ++row; break; }
    }
  }
  v.resize(row);
  return v;
}

// enlarge the verified kernel basis by the prime index factors that trial
// division can see; larger prime factors of the index are left alone, and
// very high-dimensional kernels are only made vectorwise primitive
void saturate_best_effort(Mat& basis) {
  int k = (int)basis.size();
  for (auto& v : basis) make_primitive(v);
  if (k <= 1 || k > 64) return;
  Mat gr(k, std::vector<mpz_class>(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      mpz_class s = 0;
      for (size_t t = 0; t < basis[i].size(); ++t) s += basis[i][t] * basis[j][t];
      gr[i][j] = gr[j][i] = s;
    }
  mpz_class rest = abs(det_bareiss(gr));
  std::vector<unsigned long> primes;
  for (unsigned long p = 2; p <= 100000 && rest > 1; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      primes.push_back(p);
      while (mpz_divisible_ui_p(rest.get_mpz_t(), p))
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    }
  }
  int nc = (int)basis[0].size();
  for (unsigned long p : primes) {
    for (int guard = 0; guard < 256; ++guard) {
      // left kernel of the basis matrix mod p via [B | I] row echelon
      int kb = (int)basis.size();
      std::vector<std::vector<unsigned long>> w(kb, std::vector<unsigned long>(nc + kb, 0));
      for (int i = 0; i < kb; ++i) {
        for (int j = 0; j < nc; ++j) w[i][j] = mod_of(basis[i][j], p);
        w[i][nc + i] = 1;
      }
      int row = 0;
      for (int col = 0; col < nc && row < kb; ++col) {
        int piv = -1;
        for (int i = row; i < kb; ++i)
          if (w[i][col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(w[piv], w[row]);
        unsigned long inv = invmod(w[row][col], p);
        for (int j = 0; j < nc + kb; ++j) w[row][j] = mulmod(w[row][j], inv, p);
        for (int i = row + 1; i < kb; ++i) {
          unsigned long f = w[i][col];
          if (!f) continue;
          for (int j = 0; j < nc + kb; ++j)
            w[i][j] = submod(w[i][j], mulmod(f, w[row][j], p), p);
        }
        ++row;
      }
      if (row == kb) break; // full rank mod p: nothing left at this prime
      std::vector<mpz_class> comb(nc, 0);
      for (int i = 0; i < kb; ++i) {
        unsigned long c = w[row][nc + i];
        if (!c) continue;
        for (int j = 0; j < nc; ++j) comb[j] += mpz_class(c) * basis[i][j];
      }
      bool divisible = true;
      for (const auto& e : comb)
        if (!mpz_divisible_ui_p(e.get_mpz_t(), p)) { divisible = false; break; }
      if (!divisible) break; // unexpected: leave this prime alone
      for (auto& e : comb) mpz_divexact_ui(e.get_mpz_t(), e.get_mpz_t(), p);
      basis.push_back(comb);
      basis = row_lattice_basis(std::move(basis));
      if ((int)basis.size() != kb) break;
    }
  }
  for (auto& v : basis) make_primitive(v);
}

Mat kernel_small(const IntegerMatrix& m) {
  int r = m.rows, c = m.cols;
  Mat top(c, std::vector<mpz_class>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) top[j][i] = m.a[i][j];
  Mat rec(c, std::vector<mpz_class>(c, 0));
  for (int j = 0; j < c; ++j) rec[j][j] = 1;
  std::vector<int> act(c);
  std::iota(act.begin(), act.end(), 0);
  for (int row = 0; row < r; ++row) {
    while (true) {
      int piv = -1;
      int nonzero = 0;
      for (int idx : act)
        if (top[idx][row] != 0) {
          ++nonzero;
          if (piv < 0 || cmpabs(top[idx][row], top[piv][row]) < 0) piv = idx;
        }
      if (piv < 0) break;
      if (nonzero == 1) {
        act.erase(std::find(act.begin(), act.end(), piv));
        break;
      }
      for (int idx : act) {
        if (idx == piv || top[idx][row] == 0) continue;
        mpz_class q = floor_div(top[idx][row], top[piv][row]);
        if (q == 0) continue;
        for (int i = row; i < r; ++i) top[idx][i] -= q * top[piv][i];
        for (int i = 0; i < c; ++i) rec[idx][i] -= q * rec[piv][i];
      }
    }
  }
  Mat basis;
  for (int idx : act) basis.push_back(rec[idx]);
  for (const auto& v : basis)
    if (!in_kernel(m, v)) throw std::logic_error("kernel_small: verification failed");
  return basis;
}

Mat kernel_dixon(const IntegerMatrix& m) {
  mpz_class pz = kP61;
  for (int attempt = 0; attempt < 12; ++attempt) {
    unsigned long p = pz.get_ui();
    ModEchelon e = echelon_mod_p(m, p);
    if (e.rank == m.cols) return {};
    int r = e.rank;
    Mat a(r, std::vector<mpz_class>(r));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) a[i][j] = m.a[e.pivot_rows[i]][e.pivot_cols[j]];
    LuModP lu;
    bool ok = r == 0 || lu_mod_p(a, p, lu);
    Mat basis;
    if (ok) {
      for (int f : e.free_cols) {
        std::vector<mpq_class> y(r, 0);
        if (r > 0) {
          std::vector<mpz_class> b(r);
          for (int i = 0; i < r; ++i) b[i] = -m.a[e.pivot_rows[i]][f];
          if (!dixon_solve(a, lu, b, y)) { ok = false; break; }
        }
        mpz_class den = 1;
        for (const auto& q : y) den = lcm(den, q.get_den());
        std::vector<mpz_class> v(m.cols, 0);
        v[f] = den;
        for (int i = 0; i < r; ++i) v[e.pivot_cols[i]] = mpq_class(mpq_class(den) * y[i]).get_num();
        make_primitive(v);
        if (!in_kernel(m, v)) { ok = false; break; }
        basis.push_back(v);
      }
    }
    if (ok) {
      saturate_best_effort(basis);
      return basis;
    }
    mpz_nextprime(pz.get_mpz_t(), pz.get_mpz_t());
  }
  throw std::runtime_error("kernel_basis: modular pipeline failed to stabilize");
}

// ------------------------------------------------------------------- LLL --

struct LllState {
  int k = 0;
  Mat b;                     // vectors as rows
  Mat g;                     // gram of b under the working form
  std::vector<mpz_class> d;  // d[0] = 1, d[i+1] = det of leading (i+1)-block
  Mat lam;                   // lam[i][j] for j < i

  bool init() {
    d.assign(k + 1, 0);
    d[0] = 1;
    lam.assign(k, std::vector<mpz_class>(k, 0));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j <= i; ++j) {
        mpz_class u = g[i][j];
        for (int t = 0; t < j; ++t) {
          u = d[t + 1] * u - lam[i][t] * lam[j][t];
          u = exact_div(u, d[t]);
        }
        if (j < i)
          lam[i][j] = u;
        else {
          if (u <= 0) return false;
          d[i + 1] = u;
        }
      }
    return true;
  }

  void red(int kk, int l) {
    mpz_class two_lam = 2 * lam[kk][l];
    if (cmpabs(two_lam, d[l + 1]) <= 0) return;
    mpz_class q = floor_div(two_lam + d[l + 1], 2 * d[l + 1]);
    if (q == 0) return;
    for (size_t c = 0; c < b[kk].size(); ++c) b[kk][c] -= q * b[l][c];
    mpz_class gkl = g[kk][l];
    for (int j = 0; j < k; ++j) {
      if (j == kk) continue;
      g[kk][j] -= q * g[l][j];
      g[j][kk] = g[kk][j];
    }
    g[kk][kk] += q * q * g[l][l] - 2 * q * gkl;
    for (int j = 0; j < l; ++j) lam[kk][j] -= q * lam[l][j];
    lam[kk][l] -= q * d[l + 1];
  }

  void swap_step(int kk) {
    std::swap(b[kk], b[kk - 1]);
    std::swap(g[kk], g[kk - 1]);
    for (int i = 0; i < k; ++i) std::swap(g[i][kk], g[i][kk - 1]);
    for (int j = 0; j < kk - 1; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
    mpz_class lamv = lam[kk][kk - 1];
    mpz_class dnew = exact_div(d[kk - 1] * d[kk + 1] + lamv * lamv, d[kk]);
    for (int i = kk + 1; i < k; ++i) {
      mpz_class t1 = lam[i][kk - 1], t2 = lam[i][kk];
      lam[i][kk - 1] = exact_div(d[kk - 1] * t2 + lamv * t1, d[kk]);
      lam[i][kk] = exact_div(d[kk + 1] * t1 - lamv * t2, d[kk]);
    }
    d[kk] = dnew;
  }

  void run() {
    int kk = 1;
    while (kk < k) {
      red(kk, kk - 1);
      mpz_class lhs = 100 * d[kk + 1] * d[kk - 1];
      mpz_class rhs = 99 * d[kk] * d[kk] - 100 * lam[kk][kk - 1] * lam[kk][kk - 1];
      if (lhs < rhs) {
        swap_step(kk);
        kk = std::max(1, kk - 1);
      } else {
        for (int l = kk - 2; l >= 0; --l) red(kk, l);
        ++kk;
      }
    }
  }
};

// gram of the rows under `gram`, scaled integral; uniform scaling changes
// neither the minimizer nor the reduction trajectory
Mat integral_gram(const Mat& rows, const QMat* gram) {
  int k = (int)rows.size();
  Mat g(k, std::vector<mpz_class>(k));
  if (!gram) {
    for (int i = 0; i < k; ++i)
      for (int j = 0; j <= i; ++j) {
        mpz_class s = 0;
        for (size_t t = 0; t < rows[i].size(); ++t) s += rows[i][t] * rows[j][t];
        g[i][j] = g[j][i] = s;
      }
    return g;
  }
  size_t n = gram->size();
  for (const auto& r : rows)
    if (r.size() != n) throw std::invalid_argument("gram dimension mismatch");
  Mat scaled;
  scale_to_integers(*gram, scaled);
  Mat u(k, std::vector<mpz_class>(n, 0));
  for (int i = 0; i < k; ++i)
    for (size_t s = 0; s < n; ++s) {
      mpz_class acc = 0;
      for (size_t t = 0; t < n; ++t) acc += scaled[s][t] * rows[i][t];
      u[i][s] = acc;
    }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      mpz_class s = 0;
      for (size_t t = 0; t < n; ++t) s += rows[j][t] * u[i][t];
      g[i][j] = g[j][i] = s;
    }
  return g;
}

// prune a spanning set to a row basis, keeping the earliest independent rows
Mat independent_rows(const Mat& span) {
  if (span.empty()) return {};
  int nr = (int)span.size(), nc = (int)span[0].size();
  Mat w = span;
  std::vector<int> orig(nr);
  std::iota(orig.begin(), orig.end(), 0);
  std::vector<int> keep;
  int row = 0;
  mpz_class prev = 1;
  for (int col = 0; col < nc && row < nr; ++col) {
    int piv = -1;
    for (int i = row; i < nr; ++i)
      if (w[i][col] != 0) { piv = i; break; }
    if (piv < 0) continue;
    std::swap(w[piv], w[row]);
    std::swap(orig[piv], orig[row]);
    for (int i = row + 1; i < nr; ++i) {
      for (int j = col + 1; j < nc; ++j) {
        mpz_class t = w[i][j] * w[row][col] - w[i][col] * w[row][j];
        w[i][j] = exact_div(t, prev);
      }
      w[i][col] = 0;
    }
    prev = w[row][col];
    keep.push_back(orig[row]);
    ++row;
  }
  std::sort(keep.begin(), keep.end());
  Mat out;
  for (int i : keep) out.push_back(span[i]);
  return out;
}

void canonical_sign(std::vector<mpz_class>& v) {
  for (const auto& e : v) {
    if (e > 0) return;
    if (e < 0) {
      for (auto& x : v) x = -x;
      return;
    }
  }
}

bool lex_less(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

mpz_class form_value(const std::vector<mpz_class>& v, const Mat& scaled_or_empty) {
  if (scaled_or_empty.empty()) {
    mpz_class s = 0;
    for (const auto& e : v) s += e * e;
    return s;
  }
  size_t n = scaled_or_empty.size();
  mpz_class s = 0;
  for (size_t i = 0; i < n; ++i) {
    mpz_class acc = 0;
    for (size_t j = 0; j < n; ++j) acc += scaled_or_empty[i][j] * v[j];
    s += v[i] * acc;
  }
  return s;
}

// exhaustive shortest-vector search over the span of the rows under the form
// giving gram matrix g; ties resolved by the canonical (sign-normalized,
// lexicographically smallest) ambient vector
std::vector<mpz_class> enumerate_shortest(const Mat& g, const Mat& rows) {
  int k = (int)g.size();
  std::vector<std::vector<mpq_class>> mu(k, std::vector<mpq_class>(k, 0));
  std::vector<mpq_class> nd(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j <= i; ++j) {
      mpq_class s(g[i][j]);
      for (int t = 0; t < j; ++t) s -= mu[i][t] * mu[j][t] * nd[t];
      if (j < i)
        mu[i][j] = s / nd[j];
      else
        nd[i] = s;
    }
  auto ambient = [&](const std::vector<mpz_class>& coeff) {
    std::vector<mpz_class> w(rows[0].size(), 0);
    for (int i = 0; i < k; ++i)
      if (coeff[i] != 0)
        for (size_t j = 0; j < w.size(); ++j) w[j] += coeff[i] * rows[i][j];
    canonical_sign(w);
    return w;
  };
  int init = 0;
  for (int i = 1; i < k; ++i)
    if (g[i][i] < g[init][init]) init = i;
  mpq_class best(g[init][init]);
  std::vector<mpz_class> coeff0(k, 0);
  coeff0[init] = 1;
  std::vector<mpz_class> best_w = ambient(coeff0);
  std::vector<mpz_class> x(k, 0);
  std::vector<mpq_class> tail(k + 1, 0);
  long nodes = 0;
  std::function<void(int)> rec = [&](int j) {
    if (++nodes > 40000000L) return;
    mpq_class c = 0;
    for (int i = j + 1; i < k; ++i) c -= mu[i][j] * x[i];
    mpq_class twoc = 2 * c;
    mpz_class nearest = floor_div(twoc.get_num() + twoc.get_den(), 2 * twoc.get_den());
    for (int dir = 0; dir < 2; ++dir) {
      for (long s = dir;; ++s) {
        mpz_class cand = dir == 0 ? mpz_class(nearest + s) : mpz_class(nearest - s);
        mpq_class dq = mpq_class(cand) - c;
        mpq_class val = tail[j + 1] + nd[j] * dq * dq;
        if (val > best) break;
        x[j] = cand;
        if (j == 0) {
          bool zero = true;
          for (const auto& e : x)
            if (e != 0) { zero = false; break; }
          if (!zero) {
            if (val < best) {
              best = val;
              best_w = ambient(x);
            } else {
              std::vector<mpz_class> w = ambient(x);
              if (lex_less(w, best_w)) best_w = w;
            }
          }
        } else {
          tail[j] = val;
          rec(j - 1);
        }
      }
      x[j] = 0;
    }
  };
  tail[k] = 0;
  rec(k - 1);
  return best_w;
}

} // namespace

// ----------------------------------------------------------- lattice type --

HermitianLattice HermitianLattice::make(QMat gram) {
  check_square_symmetric(gram);
  int n = (int)gram.size();
  for (int k = 1; k <= n; ++k) {
    QMat lead(k, std::vector<mpq_class>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) lead[i][j] = gram[i][j];
    if (det_rational(lead) <= 0) throw SingularGram("gram matrix is not positive definite");
  }
  HermitianLattice l;
  l.rank = n;
  l.gram = std::move(gram);
  return l;
}

HermitianLattice HermitianLattice::standard(int rank) {
  if (rank <= 0) throw std::invalid_argument("rank must be positive");
  QMat g(rank, std::vector<mpq_class>(rank, 0));
  for (int i = 0; i < rank; ++i) g[i][i] = 1;
  HermitianLattice l;
  l.rank = rank;
  l.gram = std::move(g);
  return l;
}

Real arakelov_degree(const HermitianLattice& l, mpfr_prec_t prec) {
  if (l.rank == 0 || (int)l.gram.size() != l.rank)
    throw std::invalid_argument("lattice has inconsistent rank");
  mpq_class det = det_rational(l.gram);
  if (sgn(det) <= 0) throw SingularGram("gram determinant is not positive");
  Real deg = Real::from_mpq(mpq_class(-1, 2), prec) * log_of_mpq(det, prec);
  return deg + Real::from_long(l.rank) * l.lambda;
}

Real slope(const HermitianLattice& l, mpfr_prec_t prec) {
  return arakelov_degree(l, prec) / Real::from_long(l.rank);
}

Real slope_max_upper_from_filtration(const std::vector<Real>& piece_degrees) {
  if (piece_degrees.empty()) throw std::invalid_argument("empty filtration");
  Real m = piece_degrees[0];
  for (size_t i = 1; i < piece_degrees.size(); ++i) m = max(m, piece_degrees[i]);
  return m;
}

HermitianLattice twist(const HermitianLattice& l, const Real& lambda) {
  HermitianLattice out = l;
  out.lambda = out.lambda + lambda;
  return out;
}

HermitianLattice direct_sum(const HermitianLattice& a, const HermitianLattice& b) {
  if (a.lambda.lo_rational() != b.lambda.lo_rational() ||
      a.lambda.hi_rational() != b.lambda.hi_rational())
    throw std::invalid_argument("direct_sum requires equal twists");
  int n = a.rank + b.rank;
  QMat g(n, std::vector<mpq_class>(n, 0));
  for (int i = 0; i < a.rank; ++i)
    for (int j = 0; j < a.rank; ++j) g[i][j] = a.gram[i][j];
  for (int i = 0; i < b.rank; ++i)
    for (int j = 0; j < b.rank; ++j) g[a.rank + i][a.rank + j] = b.gram[i][j];
  HermitianLattice out;
  out.rank = n;
  out.gram = std::move(g);
  out.lambda = a.lambda;
  return out;
}

// ------------------------------------------------------------ integer ops --

IntegerMatrix IntegerMatrix::zero(int rows, int cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative dimension");
  IntegerMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.a.assign(rows, std::vector<mpz_class>(cols, 0));
  return m;
}

std::vector<mpz_class> matvec(const IntegerMatrix& m, const std::vector<mpz_class>& x) {
  if ((int)x.size() != m.cols) throw std::invalid_argument("matvec dimension mismatch");
  std::vector<mpz_class> y(m.rows, 0);
  for (int i = 0; i < m.rows; ++i) {
    mpz_class acc = 0;
    for (int j = 0; j < m.cols; ++j) acc += m.a[i][j] * x[j];
    y[i] = acc;
  }
  return y;
}

bool in_kernel(const IntegerMatrix& m, const std::vector<mpz_class>& x) {
  std::vector<mpz_class> y = matvec(m, x);
  for (const auto& e : y)
    if (e != 0) return false;
  return true;
}

mpz_class det_bareiss(Mat m) {
  int n = (int)m.size();
  if (n == 0) return 1;
  for (const auto& row : m)
    if ((int)row.size() != n) throw std::invalid_argument("det of non-square matrix");
  mpz_class prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (m[i][k] != 0) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        m[i][j] = exact_div(t, prev);
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : mpz_class(-m[n - 1][n - 1]);
}

int rank_mod_p(const IntegerMatrix& m, unsigned long p) {
  if (p == 0) p = kP61;
  return echelon_mod_p(m, p).rank;
}

std::vector<std::vector<mpz_class>> kernel_basis(const IntegerMatrix& m) {
  if (m.cols == 0) return {};
  if (m.rows == 0) {
    Mat basis(m.cols, std::vector<mpz_class>(m.cols, 0));
    for (int j = 0; j < m.cols; ++j) basis[j][j] = 1;
    return basis;
  }
  if (m.cols <= 96) return kernel_small(m);
  if (m.cols <= 400) return kernel_dixon(m);
  throw std::invalid_argument("kernel_basis: system too large for the exact tiers");
}

std::vector<std::vector<mpz_class>> lll_reduce(Mat basis, const QMat* gram) {
  if (basis.empty()) return basis;
  LllState st;
  st.k = (int)basis.size();
  st.b = std::move(basis);
  st.g = integral_gram(st.b, gram);
  if (!st.init()) throw std::invalid_argument("lll_reduce: rows are dependent");
  st.run();
  return st.b;
}

std::vector<mpz_class> small_vector_in_span(const Mat& span, const QMat* gram) {
  Mat nonzero;
  for (const auto& v : span) {
    bool z = true;
    for (const auto& e : v)
      if (e != 0) { z = false; break; }
    if (!z) nonzero.push_back(v);
  }
  Mat basis = independent_rows(nonzero);
  if (basis.empty()) throw std::invalid_argument("small_vector_in_span: span is zero");
  for (auto& v : basis) make_primitive(v);
  basis = lll_reduce(std::move(basis), gram);
  int k = (int)basis.size();
  std::vector<mpz_class> best;
  if (k <= 12) {
    Mat g = integral_gram(basis, gram);
    best = enumerate_shortest(g, basis);
  } else {
    Mat scaled;
    if (gram) scale_to_integers(*gram, scaled);
    best = basis[0];
    mpz_class best_val = form_value(best, scaled);
    for (const auto& v : basis) {
      mpz_class val = form_value(v, scaled);
      std::vector<mpz_class> cand = v;
      canonical_sign(cand);
      std::vector<mpz_class> cur = best;
      canonical_sign(cur);
      if (val < best_val || (val == best_val && lex_less(cand, cur))) {
        best = v;
        best_val = val;
      }
    }
  }
  canonical_sign(best);
  return best;
}

std::vector<mpz_class> small_kernel_vector(const IntegerMatrix& m, const QMat* gram) {
  Mat basis = kernel_basis(m);
  if (basis.empty()) throw TrivialKernel("the map is injective: kernel is zero");
  std::vector<mpz_class> v = small_vector_in_span(basis, gram);
  if (!in_kernel(m, v)) throw std::logic_error("small_kernel_vector: verification failed");
  return v;
}

// ------------------------------------------------------------------ siegel --

Real siegel_bound(long m, long n, const Real& c, const Real& mu_max_w, const Real& chi,
                  mpfr_prec_t prec) {
  if (n < 1 || m < n) throw std::invalid_argument("siegel_bound requires m >= n >= 1");
  Real ratio = Real::from_mpq(mpq_class(m, n), prec);
  Real out = ratio * (Real::from_long(2) * log(c));
  out = out + (ratio - Real::from_long(1)) * mu_max_w;
  out = out - chi;
  out = out + Real::from_long(3) * log_of_ulong((unsigned long)n, prec);
  return out;
}

SiegelReport verify_siegel(const IntegerMatrix& m, const std::vector<mpz_class>& x,
                           const Real& c, const Real& mu_max_w, const Real& chi,
                           mpfr_prec_t prec) {
  if (m.rows < 1 || m.cols < m.rows)
    throw std::invalid_argument("verify_siegel expects at least as many unknowns as conditions");
  bool zero = true;
  for (const auto& e : x)
    if (e != 0) { zero = false; break; }
  if (zero) throw NotInKernel("zero vector");
  if (!in_kernel(m, x)) throw NotInKernel("vector is not in the kernel");
  mpz_class nsq = 0;
  for (const auto& e : x) nsq += e * e;
  SiegelReport rep;
  rep.lognorm = Real::from_mpq(mpq_class(1, 2), prec) * log_of_mpq(mpq_class(nsq), prec);
  rep.bound = siegel_bound(m.cols, m.rows, c, mu_max_w, chi, prec);
  rep.ok = rep.lognorm.certainly_le(rep.bound);
  return rep;
}

} // namespace tsd
