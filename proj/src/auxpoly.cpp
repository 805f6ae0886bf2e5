#include "tsd/auxpoly.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include "tsd/heights.hpp"
#include "tsd/util.hpp"

namespace tsd {

namespace {

long ceil_to_long(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return mpz_get_si(r.get_mpz_t());
}

bool same_algebraic(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  return a.minpoly == b.minpoly && a.embedding == b.embedding;
}

} // namespace

WeightSystem WeightSystem::make(const mpq_class& theta1, const mpq_class& theta2,
                                int d1, int d2, const mpq_class& delta) {
  if (theta1 < 1 || theta2 < 1)
    throw std::invalid_argument("weight system: theta1, theta2 must be >= 1");
  if (d1 < 1 || d2 < 1)
    throw std::invalid_argument("weight system: bidegree must be positive");
  if (delta < 0)
    throw std::invalid_argument("weight system: delta must be nonnegative");
  WeightSystem w;
  w.theta1 = theta1;
  w.theta2 = theta2;
  w.d1 = d1;
  w.d2 = d2;
  w.delta = delta;
  return w;
}

mpq_class WeightSystem::weight(long i, long j) const {
  mpq_class a(theta1);
  a *= i;
  a /= d1;
  mpq_class b(theta2);
  b *= j;
  b /= d2;
  a += b;
  return a;
}

Staircase staircase(const WeightSystem& w, StaircaseMode mode) {
  Staircase s;
  s.weights = w;
  s.mode = mode;
  for (int i = 0; i <= w.d1; ++i)
    for (int j = 0; j <= w.d2; ++j) {
      const mpq_class val = w.weight(i, j);
      const bool in = (mode == StaircaseMode::below) ? (val < w.delta) : (val >= w.delta);
      if (in) s.members.emplace_back(i, j);
    }
  return s;
}

std::vector<std::pair<int, int>> staircase_minimal_generators(const WeightSystem& w) {
  std::vector<std::pair<int, int>> out;
  long best = w.d2 + 1;
  for (int i = 0; i <= w.d1; ++i) {
    // least j with (i/d1) theta1 + (j/d2) theta2 >= delta
    mpq_class need(w.theta1);
    need *= i;
    need /= w.d1;
    need = w.delta - need;
    long j = 0;
    if (need > 0) {
      mpq_class jq(need);
      jq *= w.d2;
      jq /= w.theta2;
      j = ceil_to_long(jq);
      if (j > w.d2) continue; // no admissible pair in this column
    }
    if (j < best) {
      out.emplace_back(i, static_cast<int>(j));
      best = j;
      if (j == 0) break; // everything further right is dominated
    }
  }
  return out;
}

StaircaseReport staircase_count_report(const WeightSystem& w) {
  StaircaseReport r;
  r.exact_count = static_cast<long>(staircase(w, StaircaseMode::below).members.size());

  mpq_class area(w.delta);
  area *= w.delta;
  area *= w.d1;
  area *= w.d2;
  mpq_class den(w.theta1);
  den *= w.theta2;
  den *= 2;
  area /= den;
  r.area_value = area;

  mpq_class e1(w.delta);
  e1 *= w.d1;
  e1 /= w.theta1;
  mpq_class e2(w.delta);
  e2 *= w.d2;
  e2 /= w.theta2;
  r.error_bound = e1 + e2 + 2;

  const long total = static_cast<long>(w.d1 + 1) * (w.d2 + 1);
  // the triangle {w < delta} reaches the edge i = d1 exactly when
  // w(d1, 0) = theta1 < delta, and similarly for j = d2
  r.saturated =
      (w.delta > w.theta1) || (w.delta > w.theta2) || (r.exact_count == total);

  mpq_class diff(r.area_value);
  diff -= r.exact_count;
  mpq_class ad(abs(diff));
  r.bound_holds = (ad <= r.error_bound);
  return r;
}

JointField joint_field(const AlgebraicNumber& a1, const AlgebraicNumber& a2) {
  JointField f;
  const QPoly zrep{mpq_class(0), mpq_class(1)};
  if (a1.is_rational() && a2.is_rational()) {
    f.minpoly = ZPoly{0, 1}; // generator 0, the field is Q itself
    f.embedding = 0;
    f.rep1 = QPoly{a1.rational_value()};
    f.rep2 = QPoly{a2.rational_value()};
  } else if (a1.is_rational()) {
    f.minpoly = a2.minpoly;
    f.embedding = a2.embedding;
    f.rep1 = QPoly{a1.rational_value()};
    f.rep2 = zrep;
  } else if (a2.is_rational()) {
    f.minpoly = a1.minpoly;
    f.embedding = a1.embedding;
    f.rep1 = zrep;
    f.rep2 = QPoly{a2.rational_value()};
  } else if (same_algebraic(a1, a2)) {
    f.minpoly = a1.minpoly;
    f.embedding = a1.embedding;
    f.rep1 = zrep;
    f.rep2 = zrep;
  } else {
    Rng rng(0x6a66696cUL); // fixed seed: the presentation must be reproducible
    Compositum c = primitive_element(a1, a2, rng);
    f.minpoly = c.gamma.minpoly;
    f.embedding = c.gamma.embedding;
    f.rep1 = c.a1_rep;
    f.rep2 = c.a2_rep;
  }
  return f;
}

IntegerMatrix vanishing_system(const AlgebraicNumber& a1, const AlgebraicNumber& a2,
                               const WeightSystem& w) {
  const Staircase below = staircase(w, StaircaseMode::below);
  const JointField F = joint_field(a1, a2);
  const int n = F.degree();
  const long cols = static_cast<long>(w.d1 + 1) * (w.d2 + 1);
  IntegerMatrix M = IntegerMatrix::zero(static_cast<int>(below.members.size()) * n,
                                        static_cast<int>(cols));

  // powers of the two representatives and their pairwise products, reduced
  std::vector<QPoly> pow1(w.d1 + 1), pow2(w.d2 + 1);
  pow1[0] = QPoly{mpq_class(1)};
  for (int s = 1; s <= w.d1; ++s) pow1[s] = nf_mul(pow1[s - 1], F.rep1, F.minpoly);
  pow2[0] = QPoly{mpq_class(1)};
  for (int t = 1; t <= w.d2; ++t) pow2[t] = nf_mul(pow2[t - 1], F.rep2, F.minpoly);
  std::vector<std::vector<QPoly>> prod(w.d1 + 1, std::vector<QPoly>(w.d2 + 1));
  for (int s = 0; s <= w.d1; ++s)
    for (int t = 0; t <= w.d2; ++t) prod[s][t] = nf_mul(pow1[s], pow2[t], F.minpoly);

  const int dm = std::max(w.d1, w.d2);
  std::vector<std::vector<mpz_class>> binom(dm + 1, std::vector<mpz_class>(dm + 1, 0));
  for (int u = 0; u <= dm; ++u)
    for (int k = 0; k <= u; ++k) binom[u][k] = binomial(u, k);

  std::vector<mpq_class> buf(cols);
  for (size_t pd = 0; pd < below.members.size(); ++pd) {
    const int i = below.members[pd].first, j = below.members[pd].second;
    for (int t = 0; t < n; ++t) {
      const long row = static_cast<long>(pd) * n + t;
      mpz_class den = 1;
      for (int u = i; u <= w.d1; ++u)
        for (int v = j; v <= w.d2; ++v) {
          const long col = static_cast<long>(u) * (w.d2 + 1) + v;
          mpq_class q = prod[u - i][v - j].coeff(t);
          if (q == 0) {
            buf[col] = 0;
            continue;
          }
          q *= binom[u][i];
          q *= binom[v][j];
          buf[col] = q;
          mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
        }
      for (int u = i; u <= w.d1; ++u)
        for (int v = j; v <= w.d2; ++v) {
          const long col = static_cast<long>(u) * (w.d2 + 1) + v;
          if (buf[col] == 0) continue;
          mpz_class scale;
          mpz_divexact(scale.get_mpz_t(), den.get_mpz_t(), buf[col].get_den_mpz_t());
          M.a[row][col] = buf[col].get_num() * scale;
          buf[col] = 0;
        }
    }
  }
  return M;
}

namespace {

BiPoly bipoly_pow(const BiPoly& b, int e) {
  BiPoly r = BiPoly::constant(1);
  for (int k = 0; k < e; ++k) r = r * b;
  return r;
}

// sections x^r y^s m(x)^p m(y)^q (x-y)^c. Locally at any conjugate pair on
// the diagonal the factor is unit * z1^p z2^q (z1-z2)^c, so every divided
// derivative D^(i,j) with i < p, j < q or i+j < p+q+c vanishes there; the
// below-staircase conditions hold as soon as the two corner weights
// w(p+c, q) and w(p, q+c) reach delta.
std::vector<std::vector<mpz_class>> diagonal_generators(const AlgebraicNumber& a,
                                                        const WeightSystem& w) {
  const int n = a.degree();
  const BiPoly mx = BiPoly::from_x(a.minpoly);
  const BiPoly my = BiPoly::from_y(a.minpoly);
  const BiPoly xmy = BiPoly::monomial(1, 0) - BiPoly::monomial(0, 1);

  std::vector<BiPoly> powx(w.d1 / n + 1), powy(w.d2 / n + 1);
  std::vector<BiPoly> powd(std::min(w.d1, w.d2) + 1);
  powx[0] = powy[0] = powd[0] = BiPoly::constant(1);
  for (size_t k = 1; k < powx.size(); ++k) powx[k] = powx[k - 1] * mx;
  for (size_t k = 1; k < powy.size(); ++k) powy[k] = powy[k - 1] * my;
  for (size_t k = 1; k < powd.size(); ++k) powd[k] = powd[k - 1] * xmy;

  std::vector<std::vector<mpz_class>> out;
  for (int p = 0; n * p <= w.d1; ++p)
    for (int q = 0; n * q <= w.d2; ++q)
      for (int c = 0; n * p + c <= w.d1 && n * q + c <= w.d2; ++c) {
        if (w.weight(p + c, q) < w.delta || w.weight(p, q + c) < w.delta) continue;
        const BiPoly base = powx[p] * powy[q] * powd[c];
        for (int r = 0; n * p + c + r <= w.d1; ++r)
          for (int s = 0; n * q + c + s <= w.d2; ++s)
            out.push_back(
                coefficient_vector(BiPoly::monomial(r, s) * base, w.d1, w.d2));
      }
  return out;
}

} // namespace

// sup of log |f(x,y)| - (d1/2) log(1+|x|^2) - (d2/2) log(1+|y|^2) estimated
// on a product grid (25 moduli x 40 arguments per factor, 10^6 pairs) with a
// first-order mesh correction; an estimate, not a certified bound
double fs_sup_grid_estimate(const BiPoly& f, int d1, int d2) {
  long emax = LONG_MIN;
  for (const auto& rowv : f.c)
    for (const auto& z : rowv) {
      if (z == 0) continue;
      long e;
      mpz_get_d_2exp(&e, z.get_mpz_t());
      emax = std::max(emax, e);
    }

  std::vector<std::vector<double>> cd(d1 + 1, std::vector<double>(d2 + 1, 0.0));
  for (int i = 0; i <= f.degx(); ++i)
    for (int j = 0; j <= f.degy(); ++j) {
      const mpz_class& z = f.c[i][j];
      if (z == 0) continue;
      long e;
      const double m = mpz_get_d_2exp(&e, z.get_mpz_t());
      cd[i][j] = std::ldexp(m, static_cast<int>(std::max(e - emax, -1060L)));
    }

  constexpr int kModuli = 25, kArgs = 40;
  const double pi = std::acos(-1.0);
  std::vector<std::complex<double>> pts;
  std::vector<double> fslog; // log(1+|z|^2) per point
  pts.reserve(kModuli * kArgs);
  for (int k = 0; k < kModuli; ++k) {
    const double modulus = std::tan(pi * (k + 0.5) / (2 * kModuli));
    for (int l = 0; l < kArgs; ++l) {
      const double phi = 2 * pi * l / kArgs;
      pts.push_back(std::polar(modulus, phi));
      fslog.push_back(std::log1p(modulus * modulus));
    }
  }

  const size_t np = pts.size();
  // g[y][u] = sum_v cd[u][v] y^v
  std::vector<std::vector<std::complex<double>>> g(np,
      std::vector<std::complex<double>>(d1 + 1));
  for (size_t yi = 0; yi < np; ++yi)
    for (int u = 0; u <= d1; ++u) {
      std::complex<double> acc = 0.0;
      for (int v = d2; v >= 0; --v) acc = acc * pts[yi] + cd[u][v];
      g[yi][u] = acc;
    }

  double best = -std::numeric_limits<double>::infinity();
  for (size_t xi = 0; xi < np; ++xi) {
    const std::complex<double> x = pts[xi];
    const double fx = 0.5 * d1 * fslog[xi];
    for (size_t yi = 0; yi < np; ++yi) {
      std::complex<double> acc = 0.0;
      for (int u = d1; u >= 0; --u) acc = acc * x + g[yi][u];
      const double a = std::abs(acc);
      if (a <= 0.0) continue;
      best = std::max(best, std::log(a) - fx - 0.5 * d2 * fslog[yi]);
    }
  }
  best += static_cast<double>(emax) * std::log(2.0);
  // largest distance to a sample in the product of round metrics
  const double mesh = 0.5 * std::hypot(pi / kModuli, 2 * pi / kArgs);
  return best + (d1 + d2) * mesh;
}

std::pair<BiPoly, ConstructionReport> construct_auxiliary(const AlgebraicNumber& a1,
                                                          const AlgebraicNumber& a2,
                                                          const WeightSystem& w,
                                                          const Real& big_a) {
  ConstructionReport rep;
  const Staircase below = staircase(w, StaircaseMode::below);
  const JointField F = joint_field(a1, a2);
  const int n = F.degree();

  IntegerMatrix M = vanishing_system(a1, a2, w);
  rep.rows = M.rows;
  rep.cols = M.cols;
  rep.rank_bound = rank_mod_p(M);

  std::vector<mpz_class> vec;
  if (M.cols <= 400) {
    auto basis = kernel_basis(M);
    if (basis.empty())
      throw EmptyKernel("vanishing conditions admit only the zero section (" +
                        std::to_string(M.rows) + " conditions, " +
                        std::to_string(M.cols) + " coefficients, modular rank " +
                        std::to_string(rep.rank_bound) + ")");
    vec = small_vector_in_span(basis);
    rep.kernel_dim = static_cast<long>(basis.size());
    rep.kernel_dim_exact = (rep.kernel_dim == M.cols - rep.rank_bound);
    rep.route = "kernel";
  } else {
    if (a1.is_rational() || !same_algebraic(a1, a2))
      throw std::invalid_argument(
          "construct_auxiliary: exact nullspace computation is limited to 400 "
          "coefficients; larger systems are only supported for equal irrational "
          "points, where a structural generating family is available");
    auto gens = diagonal_generators(a1, w);
    if (gens.empty())
      throw EmptyKernel("no admissible structural sections (" +
                        std::to_string(M.rows) + " conditions, " +
                        std::to_string(M.cols) + " coefficients, modular rank " +
                        std::to_string(rep.rank_bound) + ")");
    vec = small_vector_in_span(gens);
    if (rep.rank_bound == M.rows) {
      rep.kernel_dim = M.cols - M.rows;
      rep.kernel_dim_exact = true;
    } else {
      // rank_bound only certifies kernel_dim >= cols - rows here
      rep.kernel_dim = std::max(static_cast<long>(M.cols) - M.rows, 1L);
      rep.kernel_dim_exact = false;
    }
    rep.route = "generators";
  }

  BiPoly f = poly_from_coefficients(vec, w.d1, w.d2);
  for (const auto& [i, j] : below.members) {
    const QPoly jet = jet_coefficient(f, F.rep1, F.rep2, i, j, F.minpoly);
    if (!jet.is_zero())
      throw std::logic_error("construct_auxiliary: jet re-verification failed");
    rep.verified_conditions += n;
  }

  mpz_class sum = 0;
  for (const auto& z : vec) sum += abs(z);
  rep.log_sup_trivial = log_of_mpq(mpq_class(sum));
  rep.log_sup_grid = fs_sup_grid_estimate(f, w.d1, w.d2);

  mpq_class slack(w.theta1);
  slack *= w.theta2;
  slack *= 2;
  mpq_class dd(w.delta);
  dd *= w.delta;
  dd *= n;
  slack -= dd;
  rep.epsilon_slack = slack;
  if (slack > 0) {
    const TInvariant t1 = t_of_divisor(DivisorData::from_algnum(a1));
    const TInvariant t2 = t_of_divisor(DivisorData::from_algnum(a2));
    rep.target = big_a / Real::from_mpq(slack) * t1.t * t2.t *
                 Real::from_long(w.d1 + w.d2);
    rep.target_valid = true;
  }
  return {std::move(f), std::move(rep)};
}

std::pair<BiPoly, ConstructionReport> construct_auxiliary(const AlgebraicNumber& a1,
                                                          const AlgebraicNumber& a2,
                                                          const WeightSystem& w) {
  return construct_auxiliary(a1, a2, w, Real::from_long(1));
}

std::vector<BiPoly> auxiliary_family(const AlgebraicNumber& a1,
                                     const AlgebraicNumber& a2,
                                     const WeightSystem& w) {
  const long cols = static_cast<long>(w.d1 + 1) * (w.d2 + 1);
  std::vector<std::vector<mpz_class>> vecs;
  if (cols <= 400) {
    vecs = kernel_basis(vanishing_system(a1, a2, w));
  } else {
    if (a1.is_rational() || !same_algebraic(a1, a2))
      throw std::invalid_argument(
          "auxiliary_family: exact nullspace computation is limited to 400 "
          "coefficients; larger systems are only supported for equal irrational "
          "points, where a structural generating family is available");
    vecs = diagonal_generators(a1, w);
  }
  std::vector<BiPoly> out;
  out.reserve(vecs.size());
  for (const auto& v : vecs) out.push_back(poly_from_coefficients(v, w.d1, w.d2));
  return out;
}

PointP1 PointP1::finite(const AlgebraicNumber& v) {
  PointP1 p;
  p.value = v;
  return p;
}

PointP1 PointP1::at_infinity() {
  PointP1 p;
  p.infinite = true;
  p.value = AlgebraicNumber::from_rational(0);
  return p;
}

PointP1 PointP1::from_proj(const ProjPoint& p) {
  return p.b == 0 ? at_infinity() : finite(AlgebraicNumber::from_rational(p.affine()));
}

namespace {

BiPoly reverse_x(const BiPoly& f, int d1) {
  BiPoly g;
  for (int i = 0; i <= f.degx(); ++i)
    for (int j = 0; j <= f.degy(); ++j)
      if (f.c[i][j] != 0) g.set_coeff(d1 - i, j, f.c[i][j]);
  g.normalize();
  return g;
}

} // namespace

BiPoly chart_section(const BiPoly& f, const PointP1& p1, const PointP1& p2, int d1,
                     int d2) {
  if (f.degx() > d1 || f.degy() > d2)
    throw std::invalid_argument("chart_section: bidegree exceeds the grid");
  BiPoly g = f;
  if (p1.infinite) g = reverse_x(g, d1);
  if (p2.infinite) g = swap_variables(reverse_x(swap_variables(g), d2));
  return g;
}

AlgebraicNumber chart_value(const PointP1& p) {
  return p.infinite ? AlgebraicNumber::from_rational(0) : p.value;
}

mpq_class index_at(const BiPoly& f, const PointP1& p1, const PointP1& p2,
                   const WeightSystem& w) {
  if (f.is_zero()) throw ZeroPolynomial("index_at: zero section");
  if (f.degx() > w.d1 || f.degy() > w.d2)
    throw std::invalid_argument("index_at: bidegree exceeds the weight system");

  const BiPoly g = chart_section(f, p1, p2, w.d1, w.d2);
  const AlgebraicNumber x1 = chart_value(p1);
  const AlgebraicNumber x2 = chart_value(p2);

  const JointField F = joint_field(x1, x2);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i <= g.degx(); ++i)
    for (int j = 0; j <= g.degy(); ++j) pairs.emplace_back(i, j);
  std::sort(pairs.begin(), pairs.end(),
            [&w](const std::pair<int, int>& a, const std::pair<int, int>& b) {
              const mpq_class wa = w.weight(a.first, a.second);
              const mpq_class wb = w.weight(b.first, b.second);
              const int c = cmp(wa, wb);
              if (c != 0) return c < 0;
              return a < b;
            });
  for (const auto& [i, j] : pairs) {
    const QPoly jet = jet_coefficient(g, F.rep1, F.rep2, i, j, F.minpoly);
    if (!jet.is_zero()) return w.weight(i, j);
  }
  throw std::logic_error("index_at: nonzero section with no nonzero jet");
}

mpq_class index_at(const BiPoly& f, const AlgebraicNumber& a1,
                   const AlgebraicNumber& a2, const WeightSystem& w) {
  return index_at(f, PointP1::finite(a1), PointP1::finite(a2), w);
}

std::vector<mpz_class> coefficient_vector(const BiPoly& f, int d1, int d2) {
  if (f.degx() > d1 || f.degy() > d2)
    throw std::invalid_argument("coefficient_vector: bidegree exceeds the grid");
  std::vector<mpz_class> v(static_cast<size_t>(d1 + 1) * (d2 + 1));
  for (int i = 0; i <= f.degx(); ++i)
    for (int j = 0; j <= f.degy(); ++j)
      v[static_cast<size_t>(i) * (d2 + 1) + j] = f.c[i][j];
  return v;
}

BiPoly poly_from_coefficients(const std::vector<mpz_class>& v, int d1, int d2) {
  if (v.size() != static_cast<size_t>(d1 + 1) * (d2 + 1))
    throw std::invalid_argument("poly_from_coefficients: wrong vector length");
  BiPoly f;
  f.c.assign(d1 + 1, std::vector<mpz_class>(d2 + 1, 0));
  for (int i = 0; i <= d1; ++i)
    for (int j = 0; j <= d2; ++j) f.c[i][j] = v[static_cast<size_t>(i) * (d2 + 1) + j];
  f.normalize();
  return f;
}

nlohmann::json poly_to_json(const BiPoly& f, int d1, int d2) {
  nlohmann::json j;
  j["d1"] = d1;
  j["d2"] = d2;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& z : coefficient_vector(f, d1, d2)) arr.push_back(z.get_str());
  j["coeffs"] = std::move(arr);
  return j;
}

BiPoly poly_from_json(const nlohmann::json& j, int* d1_out, int* d2_out) {
  int d1 = 0, d2 = 0;
  std::vector<mpz_class> v;
  try {
    d1 = j.at("d1").get<int>();
    d2 = j.at("d2").get<int>();
    const auto& arr = j.at("coeffs");
    if (!arr.is_array()) throw ParseError("polynomial: coeffs must be an array");
    v.reserve(arr.size());
    for (const auto& e : arr) {
      mpz_class z;
      if (!e.is_string() || z.set_str(e.get<std::string>(), 10) != 0)
        throw ParseError("polynomial: bad coefficient literal");
      v.push_back(std::move(z));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("polynomial: ") + e.what());
  }
  if (d1 < 0 || d2 < 0 || v.size() != static_cast<size_t>(d1 + 1) * (d2 + 1))
    throw ParseError("polynomial: coefficient count does not match the bidegree");
  if (d1_out) *d1_out = d1;
  if (d2_out) *d2_out = d2;
  return poly_from_coefficients(v, d1, d2);
}

} // namespace tsd
