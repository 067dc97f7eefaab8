#ifndef MOTZETA_POLYNOMIAL_HPP
#define MOTZETA_POLYNOMIAL_HPP

#include <map>
#include <string>
#include <vector>

#include "motzeta/laurent.hpp"

namespace motzeta {

/**
 * Multivariate polynomial with integer coefficients over a fixed list of
 * variables; exact arithmetic, usable over any commutative ring by
 * term-by-term evaluation.
 */
class IntPolynomial {
public:
  using Exps = std::vector<unsigned>; // one exponent per variable

  explicit IntPolynomial(int nvars = 0) : nvars_(nvars) {}
  static IntPolynomial constant(int nvars, const Int& c);
  static IntPolynomial variable(int nvars, int v);

  int nvars() const { return nvars_; }
  const std::map<Exps, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  IntPolynomial operator+(const IntPolynomial& o) const;
  IntPolynomial operator-() const;
  IntPolynomial operator-(const IntPolynomial& o) const;
  IntPolynomial operator*(const IntPolynomial& o) const;
  IntPolynomial pow(long e) const; // e >= 0
  bool operator==(const IntPolynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }

  /** Partial derivative with respect to variable v. */
  IntPolynomial partial(int v) const;

  /** Substitute 0 for each variable whose index appears in `zeroed`. */
  IntPolynomial substitute_zero(const std::vector<int>& zeroed) const;

  /** Substitute x_v -> c * x_v. */
  IntPolynomial scale_variable(int v, const Int& c) const;

  /** Restrict to the variables in `keep` (in order), requiring that no other
   *  variable occurs; the result has keep.size() variables. */
  IntPolynomial restrict_to(const std::vector<int>& keep) const;

  bool uses_variable(int v) const;
  long total_degree() const; // -1 for the zero polynomial

  Int eval(const std::vector<Int>& x) const;

  /** Degree in variable v of a single monomial, summed over a block. */
  static long block_degree(const Exps& e, int lo, int hi); // sum of e[lo..hi)

  /** Canonical rendering with the given variable names, e.g. "x*y + z^2". */
  std::string str(const std::vector<std::string>& names) const;

  void add_term(const Exps& e, const Int& c); // merges equal exponents, drops zeros

private:
  int nvars_;
  std::map<Exps, Int> terms_;
};

} // namespace motzeta

#endif
