#pragma once
// Hermitian lattices over Z and the exact integer linear algebra behind the
// small-vector search. Kernels are computed exactly: unimodular column
// reduction for small systems (provably saturated), p-adic lifting with
// rational reconstruction and exact re-verification for mid-size ones.
// Reduction is the all-integer LLL on Gram matrices at delta = 99/100,
// followed by Fincke-Pohst enumeration at low rank, so small instances return
// a true shortest vector deterministically.
#include <optional>
#include <vector>
#include <gmpxx.h>
#include "tsd/interval.hpp"
#include "tsd/util.hpp"

namespace tsd {

struct HermitianLattice {
  int rank = 0;
  // exact symmetric positive-definite part; the accumulated twist lambda is
  // kept symbolically, so the effective metric is exp(-2 lambda) * gram and
  // twisting shifts the degree by rank * lambda exactly
  std::vector<std::vector<mpq_class>> gram;
  Real lambda;

  static HermitianLattice make(std::vector<std::vector<mpq_class>> gram); // validates
  static HermitianLattice standard(int rank);
};

// -1/2 log det(gram) + rank * lambda
Real arakelov_degree(const HermitianLattice& l, mpfr_prec_t prec = kDefaultPrec);
Real slope(const HermitianLattice& l, mpfr_prec_t prec = kDefaultPrec); // degree / rank
// upper bound for the maximal slope of a filtered lattice: max of the graded
// piece degrees (the caller folds in any normalization)
Real slope_max_upper_from_filtration(const std::vector<Real>& piece_degrees);
HermitianLattice twist(const HermitianLattice& l, const Real& lambda);
HermitianLattice direct_sum(const HermitianLattice& a, const HermitianLattice& b);

struct IntegerMatrix {
  int rows = 0, cols = 0;
  std::vector<std::vector<mpz_class>> a;

  static IntegerMatrix zero(int rows, int cols);
  mpz_class& at(int i, int j) { return a[i][j]; }
  const mpz_class& at(int i, int j) const { return a[i][j]; }
};

std::vector<mpz_class> matvec(const IntegerMatrix& m, const std::vector<mpz_class>& x);
bool in_kernel(const IntegerMatrix& m, const std::vector<mpz_class>& x);

// exact determinant by fraction-free elimination
mpz_class det_bareiss(std::vector<std::vector<mpz_class>> m);

// rank over F_p; a lower bound for the rational rank, so cols - rank_mod_p
// upper-bounds the kernel dimension (p is the fixed 61-bit modulus when 0)
int rank_mod_p(const IntegerMatrix& m, unsigned long p = 0);

// exact integer kernel basis, each vector verified by multiplication:
//   cols <= 96: unimodular column reduction, basis spans the full saturated
//     kernel lattice;
//   cols <= 400: modular pivoting plus p-adic solving; the basis is verified
//     and spans the rational kernel, and a best-effort pass removes the prime
//     index factors found by trial division (larger systems are the callers'
//     business: they feed explicit spanning sets to small_vector_in_span)
std::vector<std::vector<mpz_class>> kernel_basis(const IntegerMatrix& m);

// LLL-reduce the rows (independent rows required) in the quadratic form
// `gram` (Euclidean when null); all-integer arithmetic, delta = 99/100
std::vector<std::vector<mpz_class>> lll_reduce(
    std::vector<std::vector<mpz_class>> basis,
    const std::vector<std::vector<mpq_class>>* gram = nullptr);

// shortest nonzero vector of the span: LLL, then exhaustive Fincke-Pohst when
// the rank is at most 12 (true shortest); ties broken by the lexicographically
// smallest vector with positive leading entry; dependent spanning sets are
// pruned to a basis first
std::vector<mpz_class> small_vector_in_span(
    const std::vector<std::vector<mpz_class>>& span,
    const std::vector<std::vector<mpq_class>>* gram = nullptr);

// kernel_basis + small_vector_in_span; throws TrivialKernel when the map is
// injective over Q
std::vector<mpz_class> small_kernel_vector(
    const IntegerMatrix& m,
    const std::vector<std::vector<mpq_class>>* gram = nullptr);

// (m/n) log C^2 + (m/n - 1) mu_max_w - chi + 3 log n
Real siegel_bound(long m, long n, const Real& c, const Real& mu_max_w, const Real& chi,
                  mpfr_prec_t prec = kDefaultPrec);

struct SiegelReport {
  Real lognorm; // (1/2) log ||x||^2, Euclidean
  Real bound;
  bool ok = false; // lognorm provably <= bound
};

SiegelReport verify_siegel(const IntegerMatrix& m, const std::vector<mpz_class>& x,
                           const Real& c, const Real& mu_max_w, const Real& chi,
                           mpfr_prec_t prec = kDefaultPrec);

} // namespace tsd
