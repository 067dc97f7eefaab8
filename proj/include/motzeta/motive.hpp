#ifndef MOTZETA_MOTIVE_HPP
#define MOTZETA_MOTIVE_HPP

#include <map>
#include <optional>
#include <string>

#include "motzeta/laurent.hpp"

namespace motzeta {

/**
 * Element of the Grothendieck ring of varieties with the class of the affine
 * line inverted and the elements 1 - L^i inverted: represented as an exact
 * fraction p(L) / prod_k (1 - L^{i_k}) with p an integer Laurent polynomial.
 *
 * Values are kept in a normal form where no denominator factor divides the
 * numerator exactly (greedy removal, largest exponent first). The normal form
 * of a given ring element is not unique across different fraction
 * presentations, so equality is decided by cross-multiplication, never by
 * representation comparison.
 */
class Motive {
public:
  Motive() = default;
  Motive(long c) : num_(c) {}                  // NOLINT(google-explicit-constructor)
  Motive(const Int& c) : num_(c) {}            // NOLINT(google-explicit-constructor)
  Motive(const LaurentPoly& p) : num_(p) {}    // NOLINT(google-explicit-constructor)

  /** p / prod (1 - L^i) over the multiset den (exponent -> multiplicity). */
  static Motive fraction(const LaurentPoly& p, const std::map<long, int>& den);

  /** The class of the affine line. */
  static Motive lefschetz() { return Motive(LaurentPoly::monomial(Int(1), 1)); }
  static Motive lefschetz_pow(long e) { return Motive(LaurentPoly::monomial(Int(1), e)); }

  const LaurentPoly& num() const { return num_; }
  const std::map<long, int>& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  /** True when the denominator is trivial. */
  bool is_polynomial() const { return den_.empty(); }

  Motive operator-() const;
  Motive operator+(const Motive& o) const;
  Motive operator-(const Motive& o) const;
  Motive operator*(const Motive& o) const;
  Motive& operator+=(const Motive& o) { return *this = *this + o; }
  Motive& operator-=(const Motive& o) { return *this = *this - o; }
  Motive& operator*=(const Motive& o) { return *this = *this * o; }

  /**
   * Multiplicative inverse, when it exists in the localized ring: requires
   * the numerator to factor as +/- L^a * prod (1 - L^i)^k (equivalently, all
   * numerator roots are roots of unity and the content is +/- 1). Returns
   * std::nullopt otherwise.
   */
  std::optional<Motive> inverse() const;

  Motive pow(long e) const; // negative e requires inverse() to exist

  /** Cross-multiplied equality of fractions. */
  bool equals(const Motive& o) const;
  bool operator==(const Motive& o) const { return equals(o); }
  bool operator!=(const Motive& o) const { return !equals(o); }

  /** Representation ordering for canonical containers (not value order). */
  bool repr_less(const Motive& o) const;

  /**
   * Exact evaluation at L = q; raises PoleAtQ when a denominator factor
   * vanishes at q.
   */
  Rat specialize(const Rat& q) const;

  /** Denominator multiset as an expanded Laurent polynomial. */
  LaurentPoly den_poly() const;

  /** Canonical rendering: "(L^2 - L)/((1 - L)*(1 - L^3))". */
  std::string str() const;

private:
  void normalize();

  LaurentPoly num_;
  std::map<long, int> den_; // exponent i -> multiplicity of (1 - L^i)
};

} // namespace motzeta

#endif
