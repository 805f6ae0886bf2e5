#pragma once
// Shared plumbing: error types, deterministic RNG, number formatting.
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>
#include <gmpxx.h>

namespace tsd {

// Named error conditions used across modules. Each carries a message with
// the offending values so CLI surfaces can print actionable diagnostics.
struct ReducibleMinpoly : std::runtime_error { using std::runtime_error::runtime_error; };
struct ZeroPolynomial : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotReal : std::runtime_error { using std::runtime_error::runtime_error; };
struct PointOnDivisor : std::runtime_error { using std::runtime_error::runtime_error; };
struct SingularGram : std::runtime_error { using std::runtime_error::runtime_error; };
struct TrivialKernel : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotInKernel : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptyKernel : std::runtime_error { using std::runtime_error::runtime_error; };
struct IndexTooLarge : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotInIdeal : std::runtime_error { using std::runtime_error::runtime_error; };
struct NotIsolated : std::runtime_error { using std::runtime_error::runtime_error; };
struct QuadratureBudgetExceeded : std::runtime_error { using std::runtime_error::runtime_error; };
struct PrecisionExhausted : std::runtime_error { using std::runtime_error::runtime_error; };
struct DivisionByZero : std::runtime_error { using std::runtime_error::runtime_error; };
struct ParseError : std::runtime_error { using std::runtime_error::runtime_error; };

// Deterministic RNG: every randomized test/report derives its stream from an
// explicit seed so outputs are reproducible byte for byte.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t u64() { return eng_(); }
  // uniform in [lo, hi] inclusive
  long range(long lo, long hi) {
    return lo + static_cast<long>(u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  mpz_class mpz_range(const mpz_class& lo, const mpz_class& hi) {
    mpz_class span = hi - lo + 1, r;
    // rejection-free: 128 random bits mod span (bias negligible and, more to
    // the point, deterministic)
    mpz_class big = mpz_class(u64());
    big <<= 64; big += u64();
    mpz_mod(r.get_mpz_t(), big.get_mpz_t(), span.get_mpz_t());
    return lo + r;
  }
  double unit() { // deterministic uniform in [0,1)
    return static_cast<double>(u64() >> 11) * 0x1.0p-53;
  }
private:
  std::mt19937_64 eng_;
};

inline mpq_class mpq_from_string(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

std::string mpz_to_string(const mpz_class& z);

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  if (k > n) return 0;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline mpz_class factorial(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

// Integer factorization for Weil-function supports: trial division by a small
// sieve, then Miller-Rabin plus Pollard rho for the leftovers. Inputs have at
// most a few dozen digits here, so this terminates quickly.
std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n);

bool is_probable_prime(const mpz_class& n);

} // namespace tsd
