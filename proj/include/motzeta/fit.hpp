#ifndef MOTZETA_FIT_HPP
#define MOTZETA_FIT_HPP

#include <utility>
#include <vector>

#include "motzeta/series.hpp"

namespace motzeta {

/** A fit basis entry: a product of generators (usually a single one). */
using BasisKey = std::vector<Generator>;

/**
 * Solves for the unique combination sum_k c_k * prod(basis[k]) whose T^m
 * coefficients match every supplied (m, value) pair; exact linear algebra
 * over fractions of Laurent polynomials.
 *
 * Raises Inconsistent when no combination matches all coefficients,
 * Underdetermined when the data does not pin the coefficients down, and
 * ValidationError unless #coeffs >= #basis + 1 with distinct, deduplicated
 * inputs.
 */
RationalSeries fit_series(const std::vector<std::pair<long, Motive>>& coeffs,
                          const std::vector<BasisKey>& basis);

struct NumericFit {
  std::vector<Rat> coeffs; // one per basis key
  Rat limit;               // sum_k c_k * (-1)^{#gens in key k}
};

/**
 * Same fit with every quantity specialized at L = q (q a positive integer
 * prime in practice); used where only numeric coefficient data exists.
 */
NumericFit fit_series_at(const std::vector<std::pair<long, Rat>>& coeffs,
                         const std::vector<BasisKey>& basis, const Rat& q);

/** Exact T^m coefficient of prod(key) as a Laurent polynomial. */
LaurentPoly basis_coefficient(const BasisKey& key, long m);

/** The same coefficient evaluated at L = q. */
Rat basis_coefficient_at(const BasisKey& key, long m, const Rat& q);

} // namespace motzeta

#endif
