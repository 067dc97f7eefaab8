#ifndef MOTZETA_LAURENT_HPP
#define MOTZETA_LAURENT_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace motzeta {

using Int = mpz_class;
using Rat = mpq_class;

/** q^e for integer e of either sign; raises PoleAtQ on 0^negative. */
Rat rat_pow(const Rat& q, long e);

/**
 * Laurent polynomial in one variable L with arbitrary-precision integer
 * coefficients. The term map never stores zero coefficients.
 */
class LaurentPoly {
public:
  LaurentPoly() = default;
  LaurentPoly(long c) { set_term(0, Int(c)); }           // NOLINT(google-explicit-constructor)
  LaurentPoly(const Int& c) { set_term(0, c); }          // NOLINT(google-explicit-constructor)

  /** c * L^e */
  static LaurentPoly monomial(const Int& c, long e);
  /** 1 - L^i */
  static LaurentPoly one_minus_power(long i);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  /** Nonzero single term; returns (coeff, exp). */
  std::optional<std::pair<Int, long>> as_monomial() const;

  const std::map<long, Int>& terms() const { return terms_; }
  Int coeff(long e) const;
  void set_term(long e, const Int& c);

  long min_exp() const; // pre: !is_zero()
  long max_exp() const; // pre: !is_zero()

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
  bool operator<(const LaurentPoly& o) const { return terms_ < o.terms_; }

  /**
   * Exact division; returns nothing when the divisor does not divide *this
   * over the integers. Divisor must be nonzero.
   */
  std::optional<LaurentPoly> divide_exact(const LaurentPoly& d) const;

  /** Exact evaluation at L = q. */
  Rat eval(const Rat& q) const;

  /** Canonical rendering, terms in descending exponent: "L^2 - 3*L + L^-1". */
  std::string str() const;

private:
  std::map<long, Int> terms_;
};

} // namespace motzeta

#endif
