#include "tsd/util.hpp"

namespace tsd {

std::string mpz_to_string(const mpz_class& z) { return z.get_str(); }

bool is_probable_prime(const mpz_class& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n, unsigned long c0) {
  // Brent's variant; deterministic cycle parameters so factorizations are
  // reproducible.
  mpz_class x = 2, y = 2, d = 1, c = c0;
  mpz_class diff, prod = 1;
  int cnt = 0;
  while (d == 1) {
    x = (x * x + c) % n;
    y = (y * y + c) % n;
    y = (y * y + c) % n;
    diff = x - y;
    if (diff < 0) diff = -diff;
    if (diff == 0) return 0; // cycle degenerated, caller retries with new c
    prod = (prod * diff) % n;
    if (++cnt == 64) {
      mpz_gcd(d.get_mpz_t(), prod.get_mpz_t(), n.get_mpz_t());
      cnt = 0;
      prod = 1;
    }
  }
  if (d == n) return 0;
  return d;
}

void factor_rec(mpz_class n, std::vector<std::pair<mpz_class, unsigned>>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    for (auto& [p, e] : out)
      if (p == n) { ++e; return; }
    out.emplace_back(n, 1);
    return;
  }
  mpz_class d = 0;
  for (unsigned long c = 1; d == 0; ++c) d = pollard_rho(n, c);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

} // namespace

std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n) {
  std::vector<std::pair<mpz_class, unsigned>> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  static const unsigned long small_primes_limit = 10000;
  for (unsigned long p = 2; p < small_primes_limit && mpz_class(p) * p <= n; p = (p == 2 ? 3 : p + 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      unsigned e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      out.emplace_back(p, e);
    }
  }
  if (n > 1) factor_rec(n, out);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

} // namespace tsd
