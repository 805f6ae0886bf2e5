// Command-line driver: JSON experiment configs in, machine-readable files
// out. Subcommands cover auxiliary-section construction, approximation
// hunts, index queries, pair certificates, and the library selftest. All
// output is deterministic for a fixed config and seed.
#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tsd/auxpoly.hpp"
#include "tsd/blowup.hpp"
#include "tsd/heights.hpp"
#include "tsd/interval.hpp"
#include "tsd/lattice.hpp"
#include "tsd/numbers.hpp"
#include "tsd/selftest.hpp"
#include "tsd/util.hpp"

namespace {

using nlohmann::json;
using namespace tsd;

// ---- literal parsing ----------------------------------------------------

// accepts "a/b", plain integers, and decimal strings like "2.5" or "-0.31"
mpq_class parse_rational(const std::string& s) {
  if (s.empty()) throw ParseError("empty rational literal");
  if (s.find('/') != std::string::npos) return mpq_from_string(s);
  std::size_t dot = s.find('.');
  if (dot == std::string::npos) return mpq_from_string(s);
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+")
    throw ParseError("bad rational literal: " + s);
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw ParseError("bad rational literal: " + s);
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

mpq_class rational_field(const json& v, const std::string& what) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return mpq_class(long(v.get<std::int64_t>()));
  } catch (const ParseError&) {
    throw ParseError("bad rational in field " + what + ": " + v.dump());
  }
  throw ParseError("field " + what + " must be a rational string or integer");
}

mpz_class integer_field(const json& v, const std::string& what) {
  mpq_class q = rational_field(v, what);
  if (q.get_den() != 1) throw ParseError("field " + what + " must be an integer");
  return q.get_num();
}

Place parse_place(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "infty" || s == "oo") return Place::archimedean();
    return Place::at_prime(mpz_class(s));
  }
  if (v.is_number_integer()) return Place::at_prime(mpz_class(long(v.get<std::int64_t>())));
  throw ParseError("place must be \"inf\" or a prime: " + v.dump());
}

std::string place_label(const Place& v) {
  return v.finite ? v.prime.get_str() : std::string("inf");
}

// "a:b" projective, "a/b" or "a" affine, "inf" for (1:0)
ProjPoint parse_proj(const std::string& s) {
  if (s == "inf" || s == "infty" || s == "oo") return ProjPoint::make(1, 0);
  std::size_t colon = s.find(':');
  if (colon != std::string::npos) {
    mpz_class a(s.substr(0, colon)), b(s.substr(colon + 1));
    if (a == 0 && b == 0) throw ParseError("point (0:0) is not projective");
    return ProjPoint::make(a, b);
  }
  return ProjPoint::from_rational(parse_rational(s));
}

PointP1 parse_point_p1(const std::string& s) {
  ProjPoint p = parse_proj(s);
  return PointP1::from_proj(p);
}

json real_cell(const Real& r) {
  return json{{"value", r.to_string(15)}, {"width", r.width_string()}};
}

std::string double_cell(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- experiment configuration -------------------------------------------

struct Config {
  std::uint64_t seed = 7;

  bool has_alpha = false;
  AlgebraicNumber alpha, alpha2;

  bool has_theta = false;
  mpq_class theta1, theta2;
  bool has_epsilon = false;
  mpq_class epsilon;

  std::vector<Place> places{Place::archimedean()};
  PhiWeights phi;

  bool has_degrees = false;
  int d1 = 0, d2 = 0;
  mpq_class delta;
  long d_cap = 0;

  mpq_class a3 = 2;
  std::optional<mpq_class> big_a;

  std::string out_poly = "aux_poly.json";
  std::string out_report = "construction_report.json";
  std::string out_cert = "certificate.json";
  std::string out_hunt = "hunt.csv";
};

AlgebraicNumber parse_algnum(const json& j, const std::string& what, Rng& rng) {
  if (!j.is_object() || !j.contains("minpoly"))
    throw ParseError("field " + what + " needs {minpoly: [...], root: k}");
  std::vector<mpz_class> c;
  for (const auto& v : j.at("minpoly")) c.push_back(integer_field(v, what + ".minpoly"));
  ZPoly m;
  m.c = c;
  int root = 0;
  if (j.contains("root")) root = int(integer_field(j.at("root"), what + ".root").get_si());
  else if (j.contains("root_index"))
    root = int(integer_field(j.at("root_index"), what + ".root_index").get_si());
  return AlgebraicNumber::make(m, root, rng);
}

Config load_config(const std::string& path, std::uint64_t seed_flag, bool seed_set) {
  json j;
  {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config: " + path);
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ParseError("config JSON: " + std::string(e.what()));
    }
  }
  try {
    Config c;
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    if (j.contains("schema") && integer_field(j.at("schema"), "schema") != 1)
      throw ParseError("unsupported config schema (expected 1)");
    if (j.contains("seed")) c.seed = std::uint64_t(integer_field(j.at("seed"), "seed").get_ui());
    if (seed_set) c.seed = seed_flag;

    Rng rng(c.seed);
    if (j.contains("alpha")) {
      c.alpha = parse_algnum(j.at("alpha"), "alpha", rng);
      c.alpha2 = j.contains("alpha2") ? parse_algnum(j.at("alpha2"), "alpha2", rng) : c.alpha;
      c.has_alpha = true;
    }
    if (j.contains("theta1") != j.contains("theta2"))
      throw ParseError("theta1 and theta2 must be given together");
    if (j.contains("theta1")) {
      c.theta1 = rational_field(j.at("theta1"), "theta1");
      c.theta2 = rational_field(j.at("theta2"), "theta2");
      if (c.theta1 < 1 || c.theta2 < 1) throw ParseError("theta weights must be >= 1");
      c.has_theta = true;
    }
    if (j.contains("epsilon")) {
      c.epsilon = rational_field(j.at("epsilon"), "epsilon");
      if (c.epsilon <= 0) throw ParseError("epsilon must be positive");
      c.has_epsilon = true;
    }

    if (j.contains("places")) {
      c.places.clear();
      for (const auto& v : j.at("places")) {
        Place p = parse_place(v);
        for (const auto& seen : c.places)
          if (seen == p) throw ParseError("duplicate place " + place_label(p));
        c.places.push_back(p);
      }
      if (c.places.empty()) throw ParseError("places must be nonempty");
    }
    if (j.contains("phi")) {
      std::vector<std::pair<Place, mpq_class>> entries;
      const json& pj = j.at("phi");
      if (pj.is_object()) {
        for (auto it = pj.begin(); it != pj.end(); ++it)
          entries.emplace_back(parse_place(json(it.key())), rational_field(it.value(), "phi"));
      } else {
        for (const auto& pair : pj) {
          if (!pair.is_array() || pair.size() != 2)
            throw ParseError("phi entries must be [place, weight] pairs");
          entries.emplace_back(parse_place(pair[0]), rational_field(pair[1], "phi"));
        }
      }
      c.phi = PhiWeights::make(std::move(entries));
    } else {
      std::vector<std::pair<Place, mpq_class>> entries;
      mpq_class w(1, int(c.places.size()));
      w.canonicalize();
      for (const auto& v : c.places) entries.emplace_back(v, w);
      c.phi = PhiWeights::make(std::move(entries));
    }

    if (j.contains("degrees")) {
      const json& d = j.at("degrees");
      if (!d.is_object() || !d.contains("d1") || !d.contains("d2") || !d.contains("delta"))
        throw ParseError("degrees needs {d1, d2, delta}");
      c.d1 = int(integer_field(d.at("d1"), "degrees.d1").get_si());
      c.d2 = int(integer_field(d.at("d2"), "degrees.d2").get_si());
      c.delta = rational_field(d.at("delta"), "degrees.delta");
      if (c.d1 < 1 || c.d2 < 1 || c.delta < 0)
        throw ParseError("degrees must satisfy d1,d2 >= 1 and delta >= 0");
      c.has_degrees = true;
    }
    if (j.contains("auto_d")) {
      const json& a = j.at("auto_d");
      if (a.contains("d_cap")) c.d_cap = long(integer_field(a.at("d_cap"), "auto_d.d_cap").get_si());
    }

    if (j.contains("a3")) c.a3 = rational_field(j.at("a3"), "a3");
    if (j.contains("big_a")) c.big_a = rational_field(j.at("big_a"), "big_a");

    if (j.contains("output")) {
      const json& o = j.at("output");
      if (o.contains("poly")) c.out_poly = o.at("poly").get<std::string>();
      if (o.contains("report")) c.out_report = o.at("report").get<std::string>();
      if (o.contains("certificate")) c.out_cert = o.at("certificate").get<std::string>();
      if (o.contains("hunt")) c.out_hunt = o.at("hunt").get<std::string>();
    }

    // the counting hypothesis is advisory at config level: warn, do not fail
    if (c.has_alpha && c.has_theta) {
      mpq_class need = 2 * c.alpha.degree() + (c.has_epsilon ? c.epsilon : mpq_class(0));
      if (mpq_class(c.theta1 * c.theta2) < need)
        std::fprintf(stderr,
                     "warning: theta1*theta2 = %s is below 2n+epsilon = %s for degree %d\n",
                     mpq_class(c.theta1 * c.theta2).get_str().c_str(), need.get_str().c_str(),
                     c.alpha.degree());
    }
    return c;
  } catch (const json::exception& e) {
    throw ParseError("config JSON: " + std::string(e.what()));
  }
}

std::string out_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// ---- construct -----------------------------------------------------------

int cmd_construct(const Config& cfg, const std::string& outdir, mpfr_prec_t prec) {
  if (!cfg.has_alpha) throw ParseError("construct needs an alpha in the config");
  if (!cfg.has_theta || !cfg.has_degrees)
    throw ParseError("construct needs theta1/theta2 and degrees {d1,d2,delta}");

  std::string poly_path = out_path(outdir, cfg.out_poly);
  std::string report_path = out_path(outdir, cfg.out_report);

  if (cfg.delta == 0) {
    std::fprintf(stderr, "warning: delta = 0 imposes no conditions; emitting the section 1\n");
    BiPoly one = BiPoly::constant(1);
    json report{{"schema", 1},
                {"route", "degenerate"},
                {"rows", 0},
                {"cols", (long(cfg.d1) + 1) * (long(cfg.d2) + 1)},
                {"kernel_dim", (long(cfg.d1) + 1) * (long(cfg.d2) + 1)},
                {"kernel_dim_exact", true},
                {"verified_conditions", 0},
                {"degenerate", true}};
    write_text(poly_path, poly_to_json(one, cfg.d1, cfg.d2).dump(2) + "\n");
    write_text(report_path, report.dump(2) + "\n");
    std::printf("construct: 0 conditions / %ld monomials (degenerate), wrote %s\n",
                (long(cfg.d1) + 1) * (long(cfg.d2) + 1), poly_path.c_str());
    return 0;
  }

  WeightSystem w = WeightSystem::make(cfg.theta1, cfg.theta2, cfg.d1, cfg.d2, cfg.delta);
  BiPoly f;
  ConstructionReport rep;
  try {
    if (cfg.big_a) {
      auto got = construct_auxiliary(cfg.alpha, cfg.alpha2, w, Real::from_mpq(*cfg.big_a, prec));
      f = got.first;
      rep = got.second;
    } else {
      auto got = construct_auxiliary(cfg.alpha, cfg.alpha2, w);
      f = got.first;
      rep = got.second;
    }
  } catch (const EmptyKernel&) {
    long conds = long(staircase(w, StaircaseMode::below).members.size()) *
                 joint_field(cfg.alpha, cfg.alpha2).degree();
    long mons = (long(cfg.d1) + 1) * (long(cfg.d2) + 1);
    std::fprintf(stderr, "empty kernel: %ld conditions / %ld monomials admit only zero\n",
                 conds, mons);
    throw;
  }

  json report{{"schema", 1},
              {"route", rep.route},
              {"rows", rep.rows},
              {"cols", rep.cols},
              {"rank_bound", rep.rank_bound},
              {"kernel_dim", rep.kernel_dim},
              {"kernel_dim_exact", rep.kernel_dim_exact},
              {"verified_conditions", rep.verified_conditions},
              {"log_sup_grid", double_cell(rep.log_sup_grid)},
              {"log_sup_trivial", real_cell(rep.log_sup_trivial)},
              {"epsilon_slack", rep.epsilon_slack.get_str()},
              {"target_valid", rep.target_valid}};
  if (rep.target_valid) report["target"] = real_cell(rep.target);

  // norm verification of the chosen coefficient vector against the exact
  // linear system, skipped when the system is too large to rebuild
  if (rep.rows > 0 && rep.rows <= 20000 && rep.cols <= 4096) {
    IntegerMatrix m = vanishing_system(cfg.alpha, cfg.alpha2, w);
    auto vec = coefficient_vector(f, cfg.d1, cfg.d2);
    if (!in_kernel(m, vec)) throw NotInKernel("constructed section fails the exact system");
    Real c = Real::from_long(2);
    for (int i = 0; i < m.rows; ++i) {
      mpz_class s = 0;
      for (int jj = 0; jj < m.cols; ++jj) s += abs(m.a[i][jj]);
      if (s > 2) c = max(c, Real::from_mpz(s));
    }
    SiegelReport sr = verify_siegel(m, vec, c, Real::from_long(0), Real::from_long(0), prec);
    report["siegel"] = json{{"lognorm", real_cell(sr.lognorm)},
                            {"bound", real_cell(sr.bound)},
                            {"ok", sr.ok}};
    if (!sr.ok) throw std::runtime_error("chosen section exceeds its size bound");
  } else {
    report["siegel"] = json{{"skipped", true}};
  }

  write_text(poly_path, poly_to_json(f, cfg.d1, cfg.d2).dump(2) + "\n");
  write_text(report_path, report.dump(2) + "\n");
  std::printf("construct: %ld conditions / %ld monomials, kernel dim %ld%s, route %s\n",
              rep.rows, rep.cols, rep.kernel_dim, rep.kernel_dim_exact ? "" : " (lower bound)",
              rep.route.c_str());
  std::printf("wrote %s and %s\n", poly_path.c_str(), report_path.c_str());
  return 0;
}

// ---- hunt ----------------------------------------------------------------

struct HuntRow {
  mpz_class p, q;
  Real h;
  bool kappa_finite = true;
  bool kappa_plus = true;    // sign of the infinite quality at q = 1
  bool on_divisor = false;   // the point equals a rational alpha exactly
  Real kappa;
  std::vector<Real> lambdas; // one per output column place
  Real max_width;            // widest interval in the row
};

// candidate numerators for denominator q: integers within `spread` of q*alpha
void add_window(std::set<std::pair<mpz_class, mpz_class>>& out, const mpz_class& q,
                double alpha_mid, long spread) {
  double target = alpha_mid * mpz_get_d(q.get_mpz_t());
  if (std::fabs(target) > 9e15) return; // beyond exact double integers: hopeless anyway
  mpz_class base(long(std::llround(target)));
  for (long d = -spread; d <= spread; ++d) {
    mpz_class p = base + d;
    mpz_class g = gcd(p, q);
    if (g == 1 || (p == 0 && q == 1)) out.emplace(p, q);
  }
}

// decides r >= s by interval comparison, widening the enclosure on demand
// through `refine`; returns nullopt only when the precision cap is hit
std::optional<bool> decide_ge(const std::function<Real(mpfr_prec_t)>& lhs,
                              const Real& rhs, mpfr_prec_t prec0) {
  for (mpfr_prec_t pr = prec0; pr <= prec0 * 64; pr *= 2) {
    Real v = lhs(pr);
    if (v.certainly_ge(rhs)) return true;
    if (v.certainly_lt(rhs)) return false;
  }
  return std::nullopt;
}

mpz_class mpq_floor(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// convergents of alpha with denominator <= q_max. The continued-fraction
// recursion runs on both endpoints of a certified enclosure; a partial
// quotient is accepted only when the endpoints agree on it, and the whole
// expansion restarts at higher precision when they diverge too early.
std::vector<std::pair<mpz_class, mpz_class>> convergents_to(
    const AlgebraicNumber& alpha, const mpz_class& q_max,
    const std::function<Real(mpfr_prec_t)>& enclose, mpfr_prec_t prec0) {
  std::vector<std::pair<mpz_class, mpz_class>> out;
  if (alpha.is_rational()) {
    mpq_class r = alpha.rational_value();
    mpz_class n = r.get_num(), den = r.get_den();
    mpz_class pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
    while (den != 0) {
      mpz_class a;
      mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), den.get_mpz_t());
      mpz_class pk = a * pm1 + pm2, qk = a * qm1 + qm2;
      if (qk > q_max) break;
      out.emplace_back(pk, qk);
      mpz_class t = n - a * den;
      n = den;
      den = t;
      pm2 = pm1; qm2 = qm1; pm1 = pk; qm1 = qk;
    }
    return out;
  }
  for (mpfr_prec_t pr = std::max<mpfr_prec_t>(prec0, 64); pr <= mpfr_prec_t(1) << 22; pr *= 2) {
    Real box = enclose(pr);
    mpq_class lo = box.lo_rational(), hi = box.hi_rational();
    out.clear();
    mpz_class pm2 = 0, qm2 = 1, pm1 = 1, qm1 = 0;
    bool settled = true;
    while (true) {
      mpz_class flo = mpq_floor(lo), fhi = mpq_floor(hi);
      if (flo != fhi) {
        settled = false;
        break;
      }
      mpz_class pk = flo * pm1 + pm2, qk = flo * qm1 + qm2;
      if (qk > q_max) break;
      out.emplace_back(pk, qk);
      pm2 = pm1; qm2 = qm1; pm1 = pk; qm1 = qk;
      mpq_class dlo = mpq_class(lo - flo), dhi = mpq_class(hi - flo);
      if (dlo == 0) { // endpoint on an integer: only refinement can decide
        settled = false;
        break;
      }
      lo = mpq_class(1 / dhi);
      hi = mpq_class(1 / dlo);
    }
    if (settled) return out;
  }
  throw PrecisionExhausted("continued-fraction refinement stalled");
}

int cmd_hunt(const Config& cfg, const std::string& kappa_str, long q_max,
             const std::string& outdir, bool to_file, mpfr_prec_t prec) {
  if (!cfg.has_alpha) throw ParseError("hunt needs an alpha in the config");
  if (q_max < 1) throw ParseError("q_max must be >= 1");
  const AlgebraicNumber& alpha = cfg.alpha;
  if (!embedding_is_real(alpha)) throw ParseError("hunt needs a real embedding");
  mpq_class kappa = parse_rational(kappa_str);

  bool weighted = false;
  for (const auto& v : cfg.places)
    if (v.finite) weighted = true;

  DivisorData divisor = DivisorData::from_algnum(alpha);

  // CSV layout: the archimedean column always comes first, then one column
  // per finite place in config order
  std::vector<Place> columns{Place::archimedean()};
  for (const auto& v : cfg.places)
    if (v.finite) columns.push_back(v);

  // certified enclosure of alpha, refined once per precision level: root
  // isolation restarts from scratch, so candidates must share the boxes
  std::map<long, Real> alpha_cache;
  auto alpha_real = [&alpha, &alpha_cache](mpfr_prec_t pr) -> const Real& {
    auto it = alpha_cache.find(long(pr));
    if (it == alpha_cache.end()) {
      mpq_class width(mpz_class(1), mpz_class(mpz_class(1) << unsigned(pr)));
      it = alpha_cache.emplace(long(pr), refine_embedding(alpha, width).re).first;
    }
    return it->second;
  };
  double alpha_mid = alpha_real(64).mid_double();

  // exhaustive denominators: everything when kappa <= 2, else up to the
  // Legendre crossover 2^{1/(kappa-2)} past which solutions track convergents
  long q_star = q_max;
  if (kappa > 2) {
    double t = 1.0 / (kappa.get_d() - 2.0);
    q_star = (t > 40) ? q_max : std::min<double>(q_max, std::ceil(std::pow(2.0, t)) + 8);
  }
  if (q_star > 5000000)
    throw ParseError("q_max too large for the exhaustive phase at this kappa");

  std::set<std::pair<mpz_class, mpz_class>> cands; // (p, q), reduced
  for (long q = 1; q <= q_star; ++q) {
    long spread = 2;
    if (kappa < 1) {
      double wdt = std::pow(double(q), 1.0 - kappa.get_d());
      if (wdt > 1e6) throw ParseError("window too wide: raise kappa or lower q_max");
      spread = long(wdt) + 2;
    }
    add_window(cands, mpz_class(q), alpha_mid, spread);
  }
  if (q_star < q_max) {
    auto enclose = [&](mpfr_prec_t pr) { return alpha_real(pr); };
    auto convs = convergents_to(alpha, mpz_class(q_max), enclose, prec);
    for (const auto& [pk, qk] : convs) {
      if (qk <= q_star) continue;
      for (long d = -1; d <= 1; ++d) {
        mpz_class p = pk + d;
        if (gcd(p, qk) == 1) cands.emplace(p, qk);
      }
    }
  }

  Real kappa_r = Real::from_mpq(kappa, prec);
  std::vector<HuntRow> rows;
  for (const auto& [p, q] : cands) {
    ProjPoint pt = ProjPoint::make(p, q);
    bool exact_hit = alpha.is_rational() && mpq_class(p, q) == alpha.rational_value();

    HuntRow row;
    row.p = pt.a;
    row.q = pt.b;

    auto quality = [&](mpfr_prec_t pr) {
      const Real& a = alpha_real(pr);
      Real dist = abs(a - Real::from_mpq(mpq_class(p, q), pr));
      return -log(dist) / log_of_mpq(mpq_class(q), pr);
    };

    bool passes = false;
    if (exact_hit) {
      row.kappa_finite = false;
      row.kappa_plus = true;
      row.on_divisor = true;
      passes = true;
    } else if (q == 1) {
      // quality degenerates at log q = 0: sign of log|alpha - p| decides
      auto dist1 = [&](mpfr_prec_t pr) {
        Real a = alpha_real(pr);
        return abs(a - Real::from_mpq(mpq_class(p), pr));
      };
      auto le_one = decide_ge([&](mpfr_prec_t pr) { return Real::from_long(1) - dist1(pr); },
                              Real::from_long(0), prec);
      row.kappa_finite = false;
      row.kappa_plus = le_one.value_or(false);
      passes = row.kappa_plus;
    } else {
      row.kappa = quality(prec);
      if (row.kappa.certainly_ge(kappa_r)) {
        passes = true;
      } else if (row.kappa.certainly_lt(kappa_r)) {
        passes = false;
      } else {
        auto ge = decide_ge(quality, kappa_r, prec * 2);
        if (!ge) std::fprintf(stderr, "warning: undecided quality at %s/%s\n",
                              p.get_str().c_str(), q.get_str().c_str());
        passes = ge.value_or(false);
      }
    }

    if (weighted && !exact_hit) {
      // place-weighted criterion: the Weil sum over the configured places
      // must reach kappa times the height
      auto margin = [&](mpfr_prec_t pr) {
        Real sum = Real::from_long(0);
        for (const auto& v : cfg.places) sum = sum + weil_local(divisor, v, pt, pr);
        return sum - Real::from_mpq(kappa, pr) * fs_height(pt, pr);
      };
      auto ge = decide_ge(margin, Real::from_long(0), prec);
      passes = ge.value_or(false);
    }
    if (!passes) continue;

    row.h = fs_height(pt, prec);
    if (!exact_hit)
      for (const auto& v : columns) row.lambdas.push_back(weil_local(divisor, v, pt, prec));

    row.max_width = row.h;
    if (row.kappa_finite && row.kappa.width() > row.max_width.width()) row.max_width = row.kappa;
    for (const Real& l : row.lambdas)
      if (l.width() > row.max_width.width()) row.max_width = l;
    rows.push_back(std::move(row));
  }

  std::sort(rows.begin(), rows.end(), [](const HuntRow& a, const HuntRow& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.p < b.p;
  });

  std::ostringstream csv;
  csv << "p,q,h_fs,kappa";
  for (const auto& v : columns) csv << ",lambda_" << place_label(v);
  csv << ",passes,width\n";
  for (const auto& r : rows) {
    csv << r.p.get_str() << ',' << r.q.get_str() << ',' << r.h.to_string(15) << ',';
    if (r.kappa_finite) csv << r.kappa.to_string(15);
    else csv << (r.kappa_plus ? "inf" : "-inf");
    if (r.on_divisor)
      for (std::size_t i = 0; i < columns.size(); ++i) csv << ",inf";
    else
      for (const Real& l : r.lambdas) csv << ',' << l.to_string(15);
    csv << ",1," << r.max_width.width_string() << '\n';
  }

  if (to_file) {
    std::string path = out_path(outdir, cfg.out_hunt);
    write_text(path, csv.str());
    std::printf("hunt: %zu rows, wrote %s\n", rows.size(), path.c_str());
  } else {
    std::fputs(csv.str().c_str(), stdout);
  }
  return 0;
}

// ---- index ---------------------------------------------------------------

int cmd_index(const std::string& poly_path, const std::string& p1s, const std::string& p2s,
              const std::string& t1s, const std::string& t2s, int d1, int d2,
              const std::string& deltas) {
  json j;
  {
    std::ifstream in(poly_path);
    if (!in) throw ParseError("cannot open polynomial file: " + poly_path);
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ParseError("polynomial JSON: " + std::string(e.what()));
    }
  }
  int fd1 = 0, fd2 = 0;
  BiPoly f = poly_from_json(j, &fd1, &fd2);
  if (d1 == 0) d1 = fd1;
  if (d2 == 0) d2 = fd2;
  WeightSystem w = WeightSystem::make(parse_rational(t1s), parse_rational(t2s), d1, d2,
                                      deltas.empty() ? mpq_class(1) : parse_rational(deltas));
  mpq_class idx = index_at(f, parse_point_p1(p1s), parse_point_p1(p2s), w);
  std::printf("%s\n", idx.get_str().c_str());
  return 0;
}

// ---- certify ---------------------------------------------------------------

const char* outcome_name(CertificateOutcome o) {
  switch (o) {
    case CertificateOutcome::height_bound: return "height_bound";
    case CertificateOutcome::hypothesis_violation: return "hypothesis_violation";
    default: return "chain_satisfied";
  }
}

int cmd_certify(const Config& cfg, const std::string& p1s, const std::string& p2s,
                const std::string& outdir, bool to_file, mpfr_prec_t prec) {
  if (!cfg.has_alpha || !cfg.has_theta || !cfg.has_epsilon)
    throw ParseError("certify needs alpha, theta1/theta2 and epsilon in the config");
  CertifyConfig cc;
  cc.a3 = cfg.a3;
  cc.d_cap = cfg.d_cap;
  cc.prec = prec;
  if (cfg.big_a) cc.big_a = Real::from_mpq(*cfg.big_a, prec);

  Certificate cert = certify_pair(cfg.alpha, cfg.alpha2, parse_proj(p1s), parse_proj(p2s),
                                  cfg.theta1, cfg.theta2, cfg.epsilon, cfg.places, cfg.phi, cc);
  json doc = certificate_to_json(cert);

  if (to_file) {
    std::string path = out_path(outdir, cfg.out_cert);
    write_text(path, doc.dump(2) + "\n");
    std::printf("certify: wrote %s\n", path.c_str());
  } else {
    std::printf("%s\n", doc.dump(2).c_str());
  }
  std::fprintf(stderr, "outcome: %s", outcome_name(cert.outcome));
  if (cert.outcome == CertificateOutcome::hypothesis_violation)
    std::fprintf(stderr, " (%s)", cert.violation.c_str());
  if (cert.outcome == CertificateOutcome::height_bound)
    std::fprintf(stderr, " (max height %s)", cert.height_bound.to_string(6).c_str());
  std::fprintf(stderr, "\n");
  return 0;
}

int cmd_replay(const std::string& path) {
  json doc;
  {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open certificate: " + path);
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw ParseError("certificate JSON: " + std::string(e.what()));
    }
  }
  json again = certificate_replay(doc);
  bool identical = again.dump(2) == doc.dump(2);
  std::string kind = again.contains("outcome") && again["outcome"].contains("kind")
                         ? again["outcome"]["kind"].get<std::string>()
                         : std::string("?");
  std::printf("replay: %s, outcome %s\n", identical ? "identical" : "MISMATCH", kind.c_str());
  if (!identical) {
    std::fprintf(stderr, "replayed document differs from input\n");
    return 3;
  }
  return 0;
}

// ---- selftest --------------------------------------------------------------

int cmd_selftest(std::uint64_t seed) {
  auto results = run_selftest(seed);
  for (const auto& r : results)
    std::printf("%s [%s] %s%s%s\n", r.pass ? "pass" : "FAIL", r.suite.c_str(), r.name.c_str(),
                r.detail.empty() ? "" : " - ", r.detail.c_str());
  bool ok = all_pass(results);
  std::printf("%zu checks, %s\n", results.size(), ok ? "all passed" : "FAILURES");
  return ok ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"auxiliary sections, approximation hunts and pair certificates on P1 x P1"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long precision = long(kDefaultPrec);
  std::uint64_t seed = 7;
  bool seed_set = false;
  app.add_option("--config", config_path, "experiment config (JSON, schema 1)");
  app.add_option("--out", out_dir, "output directory for generated files");
  app.add_option("--precision", precision, "working interval precision in bits")
      ->check(CLI::Range(32L, 65536L));
  app.add_option("--seed", seed, "seed for randomized internals")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* construct = app.add_subcommand("construct", "build an auxiliary section from the config");

  auto* hunt = app.add_subcommand("hunt", "list rational approximations meeting a quality bound");
  std::string kappa_str;
  long q_max = 0;
  hunt->add_option("--kappa", kappa_str, "quality threshold (rational or decimal)")->required();
  hunt->add_option("--qmax", q_max, "largest denominator to consider")->required();

  auto* index = app.add_subcommand("index", "weighted vanishing order of a stored section");
  std::string poly_path, p1s, p2s, t1s = "1", t2s = "1", deltas;
  int id1 = 0, id2 = 0;
  index->add_option("--poly", poly_path, "polynomial JSON file")->required();
  index->add_option("--p1", p1s, "first coordinate (a:b, rational, or inf)")->required();
  index->add_option("--p2", p2s, "second coordinate")->required();
  index->add_option("--theta1", t1s, "first weight");
  index->add_option("--theta2", t2s, "second weight");
  index->add_option("--d1", id1, "first degree (default: from the file)");
  index->add_option("--d2", id2, "second degree (default: from the file)");
  index->add_option("--delta", deltas, "threshold recorded in the weight system");

  auto* certify = app.add_subcommand("certify", "evaluate the inequality chain for a pair");
  std::string c1s, c2s, replay_path;
  certify->add_option("--p1", c1s, "first point (a:b, rational, or inf)");
  certify->add_option("--p2", c2s, "second point");
  certify->add_option("--replay", replay_path, "recompute the outcome of a stored certificate");

  auto* selftest = app.add_subcommand("selftest", "run the library invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    mpfr_prec_t prec = mpfr_prec_t(precision);
    auto config = [&]() {
      if (config_path.empty()) throw ParseError("this subcommand needs --config");
      return load_config(config_path, seed, seed_set);
    };
    if (construct->parsed()) return cmd_construct(config(), out_dir, prec);
    if (hunt->parsed()) return cmd_hunt(config(), kappa_str, q_max, out_dir, !out_dir.empty(), prec);
    if (index->parsed()) return cmd_index(poly_path, p1s, p2s, t1s, t2s, id1, id2, deltas);
    if (certify->parsed()) {
      if (!replay_path.empty()) return cmd_replay(replay_path);
      if (c1s.empty() || c2s.empty())
        throw ParseError("certify needs --p1 and --p2 (or --replay FILE)");
      return cmd_certify(config(), c1s, c2s, out_dir, !out_dir.empty(), prec);
    }
    if (selftest->parsed()) return cmd_selftest(seed);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const ReducibleMinpoly& e) {
    std::fprintf(stderr, "error: reducible minimal polynomial: %s\n", e.what());
    return 1;
  } catch (const EmptyKernel& e) {
    std::fprintf(stderr, "error: empty kernel: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
