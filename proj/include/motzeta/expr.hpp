#ifndef MOTZETA_EXPR_HPP
#define MOTZETA_EXPR_HPP

#include <string>
#include <vector>

#include "motzeta/motive.hpp"
#include "motzeta/polynomial.hpp"
#include "motzeta/series.hpp"

namespace motzeta {

/**
 * Parsers for the three embedded expression grammars, sharing one tokenizer
 * and precedence climber:
 *
 *   ring values    "(L^2 - L)/((1 - L)*(1 - L^3))"      -> Motive
 *   series values  "(L - 1)*gen(-1,1) + T^2", had, lim  -> series or motive
 *   polynomials    "x*y + z^2" over declared variables  -> IntPolynomial
 *
 * All parse errors are raised as ParseError with a 1-based column position
 * ("col N: message") so callers can prefix the file line.
 */

Motive parse_motive_expr(const std::string& text);

/** Result of a series-grammar expression: lim(...) yields a ring value. */
struct SeriesExprValue {
  bool is_series = false;
  RationalSeries series; // valid when is_series
  Motive motive;         // valid when !is_series
  RationalSeries as_series() const {
    return is_series ? series : RationalSeries::from_motive(motive);
  }
};

SeriesExprValue parse_series_expr(const std::string& text);

/** Series-grammar expression coerced to a series. */
RationalSeries parse_series(const std::string& text);

/** Polynomial over the named variables; +, -, *, ^ with nonnegative powers. */
IntPolynomial parse_polynomial_expr(const std::string& text,
                                    const std::vector<std::string>& vars);

/** One fit-basis entry: "gen(-1,1)" or a product "gen(-1,1)*gen(-3,2)". */
std::vector<Generator> parse_generator_product(const std::string& text);

/** Exact rational literal: "3", "-7/4"; rejects zero denominators. */
Rat parse_rational(const std::string& text);

/** Exact integer literal. */
Int parse_integer(const std::string& text);

} // namespace motzeta

#endif
