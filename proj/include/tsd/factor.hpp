#pragma once
// Exact factorization over Q. Univariate: modular factorization, quadratic
// Hensel lifting to the Landau-Mignotte bound, subset recombination.
// Bivariate: content splitting, specialization at a good integer point and
// lifting along (y - y0), then subset recombination with exact trial division.
#include <vector>
#include <utility>
#include "tsd/poly.hpp"
#include "tsd/bipoly.hpp"
#include "tsd/util.hpp"

namespace tsd {

struct ZFactorization {
  mpq_class unit;                              // f = unit * prod factors^mult
  std::vector<std::pair<ZPoly, int>> factors;  // primitive irreducible, lc > 0
};

ZFactorization factor_z(const ZPoly& f, Rng& rng);
bool is_irreducible_z(const ZPoly& f, Rng& rng);

// irreducible factors of a primitive squarefree polynomial (lc > 0), sorted
std::vector<ZPoly> factor_squarefree_z(const ZPoly& f, Rng& rng);

struct BiFactorization {
  mpq_class unit;
  std::vector<std::pair<BiPoly, int>> factors; // primitive irreducible over Q
};

BiFactorization factor_bi(const BiPoly& f, Rng& rng);

} // namespace tsd
