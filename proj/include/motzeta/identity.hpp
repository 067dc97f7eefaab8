#ifndef MOTZETA_IDENTITY_HPP
#define MOTZETA_IDENTITY_HPP

#include <optional>
#include <vector>

#include "motzeta/arcs.hpp"
#include "motzeta/fit.hpp"
#include "motzeta/resolution.hpp"

namespace motzeta {

/**
 * One instance of the specialized integral-identity verification for a
 * polynomial f(x, y, z) in blocks of sizes (d1, d2, d3), invariant under
 * (x, y, z) -> (tau x, tau^-1 y, z).
 */
struct IdentityInstance {
  IntPolynomial f;
  BlockSpec blocks;
  std::vector<long> levels; // m values used for counts and fits
  std::vector<int> fields;  // primes qf

  std::vector<BasisKey> basis_hint; // fit basis for the full-set series
  std::vector<BasisKey> x1_basis;   // fit basis for the complement series (default: basis_hint)
  std::vector<BasisKey> rhs_basis;  // fit basis for the restricted-function series (arc route)

  enum class RhsRoute { ArcCounts, Resolution };
  RhsRoute rhs_route = RhsRoute::ArcCounts;
  std::optional<ResolutionDatum> res; // Resolution route: data for f(0,0,z) at the origin

  unsigned long seed = 0; // drives the scaling-invariance recount
};

/** The three counting problems at one level: full set, the "some block
 *  vanishes" part, and its complement. */
struct SetTriple {
  SetSpec x, x0, x1;
};

/** Builds the level-m problems; raises WeightCheckFailed unless f balances. */
SetTriple decompose(const IntPolynomial& f, const BlockSpec& blocks, long m, int qf);

/** Per-(m, qf) exact counts and the three coefficientwise checks. */
struct TermwiseRow {
  long m = 0;
  int qf = 0;
  Int count_x, count_x0, count_x1;
  bool partition_ok = false; // count_x == count_x0 + count_x1
  Int factor_lhs, factor_rhs;
  bool factor_ok = false; // window count == core count * qf^((m-1)d)
  Int product_lhs, product_rhs;
  bool product_ok = false; // vanishing-part count == Y-factor * restricted count * qf^((m-1)d3)
  bool ok() const { return partition_ok && factor_ok && product_ok; }
};

struct TermwiseResult {
  std::vector<TermwiseRow> rows;
  bool all_ok = true;
};

TermwiseResult check_termwise(const IdentityInstance& inst, Budget& budget);

/** Fitted-series data and the final specialized comparison for one qf. */
struct IdentityCell {
  int qf = 0;
  std::vector<std::pair<long, Rat>> lhs_data; // normalized full-set values per m
  std::vector<std::pair<long, Rat>> x1_data;  // normalized complement values per m
  std::vector<std::pair<long, Rat>> rhs_data; // normalized restricted-function values (arc route)
  std::vector<BasisKey> lhs_basis, x1_basis, rhs_basis; // effective fit bases
  std::vector<Rat> lhs_fit, x1_fit, rhs_fit;  // fitted basis coefficients
  Rat lhs_value, rhs_value, x1_limit;         // specialized side values and complement limit
  bool homogeneity_ok = false;                // recount after (tau, tau^-1, 1) scaling
  long tau = 1;
  bool degenerate_rhs = false;                // empty z-block: sides not compared
  bool sides_equal = false;
  bool pass = false;
};

struct IdentityResult {
  TermwiseResult termwise;
  std::vector<IdentityCell> cells;
  bool pass = false;
};

/**
 * Full verification: termwise checks on every (level, qf), normalized-count
 * fits, side comparison after specializing at each qf, complement-limit
 * vanishing, and the scaling-invariance recount.
 */
IdentityResult check_identity(const IdentityInstance& inst, Budget& budget);

} // namespace motzeta

#endif
