#ifndef MOTZETA_SERIES_HPP
#define MOTZETA_SERIES_HPP

#include <map>
#include <string>
#include <vector>

#include "motzeta/motive.hpp"

namespace motzeta {

/** The series atom L^e T^i / (1 - L^e T^i), i >= 1. */
struct Generator {
  long e = 0;
  long i = 1;

  bool operator==(const Generator& o) const { return e == o.e && i == o.i; }
  bool operator<(const Generator& o) const { return i != o.i ? i < o.i : e < o.e; }
  std::string str() const;
};

/**
 * One rational summand: T^shift times a product of generators. The multiset
 * of generators is kept sorted. A nonzero shift survives canonicalization
 * only when it cannot be absorbed into the generators (see
 * RationalSeries::add_term); such summands lie outside the span of plain
 * generator products and have no limit.
 */
struct SeriesKey {
  std::vector<Generator> gens;
  long shift = 0;

  bool operator==(const SeriesKey& o) const { return gens == o.gens && shift == o.shift; }
  bool operator<(const SeriesKey& o) const {
    if (gens != o.gens) return gens < o.gens;
    return shift < o.shift;
  }
};

/**
 * Member of the module of rational power series in T spanned by a polynomial
 * part and finite products of generators, with coefficients in the localized
 * Grothendieck ring. Supports exact coefficient extraction, the limit
 * morphism at T -> infinity, and Hadamard products on single-generator
 * shapes.
 */
class RationalSeries {
public:
  RationalSeries() = default;

  static RationalSeries from_motive(const Motive& c);
  static RationalSeries monomial(const Motive& c, long m); // c * T^m
  static RationalSeries generator(const Generator& g, const Motive& c = Motive(1));
  static RationalSeries product_key(const std::vector<Generator>& gens,
                                    const Motive& c = Motive(1));

  const std::map<long, Motive>& poly_part() const { return poly_; }
  const std::map<SeriesKey, Motive>& rational_part() const { return rat_; }

  bool is_zero() const { return poly_.empty() && rat_.empty(); }

  RationalSeries operator-() const;
  RationalSeries operator+(const RationalSeries& o) const;
  RationalSeries operator-(const RationalSeries& o) const;
  RationalSeries operator*(const RationalSeries& o) const;
  RationalSeries scale(const Motive& c) const;

  bool equals(const RationalSeries& o) const;

  /** Exact coefficient of T^m (m >= 0). */
  Motive coefficient(long m) const;

  /**
   * Limit at T -> infinity: constants pass through, a product of k
   * generators maps to (-1)^k. Raises NonvanishingPolyPart when a polynomial
   * term at T^m (m >= 1) or an unabsorbed shift summand is present.
   */
  Motive limit() const;

  /** Coefficientwise product; inputs restricted to poly + single generators. */
  static RationalSeries hadamard(const RationalSeries& a, const RationalSeries& b);

  /**
   * Adds c * T^shift * prod(gens), absorbing the shift into the generators
   * whenever some generator step divides into it (deterministic smallest-step
   * rule); residual shifts are stored as-is.
   */
  void add_term(long shift, std::vector<Generator> gens, const Motive& c);

  std::string str() const;

private:
  void add_poly(long m, const Motive& c);
  void add_key(const SeriesKey& k, const Motive& c);

  std::map<long, Motive> poly_;
  std::map<SeriesKey, Motive> rat_;
};

} // namespace motzeta

#endif
