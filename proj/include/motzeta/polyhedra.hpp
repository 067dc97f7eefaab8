#ifndef MOTZETA_POLYHEDRA_HPP
#define MOTZETA_POLYHEDRA_HPP

#include <optional>
#include <utility>
#include <vector>

#include "motzeta/motive.hpp"

namespace motzeta {

/** One linear constraint a . x REL b with exact rational data. */
struct Constraint {
  enum class Rel { Ge, Gt, Eq };
  std::vector<Rat> a;
  Rat b;
  Rel rel = Rel::Ge;
};

/** Conjunction of rational linear constraints in dimension dim. */
struct Polyhedron {
  int dim = 0;
  std::vector<Constraint> cons;
};

/** Exact emptiness test (Fourier-Motzkin with strictness tracking). */
bool polyhedron_empty(const Polyhedron& p);

/** Two-sided coordinate bounds over the polyhedron; a missing side means the
 *  coordinate is unbounded in that direction. Meaningful only when p is
 *  nonempty. */
struct CoordBounds {
  std::optional<Rat> lo, hi;
};
CoordBounds coordinate_bounds(const Polyhedron& p, int v);

/**
 * Duplicate-free enumeration of p intersected with the (1/m)-lattice, in
 * lexicographic order. Raises Unbounded unless every coordinate is bounded
 * on both sides.
 */
std::vector<std::vector<Rat>> lattice_points(const Polyhedron& p, long m);

/**
 * Weighted lattice-point sum  sum_gamma L^{(-m)|gamma|} (L-1)^n  over the
 * (1/m)-lattice points of a bounded polyhedron, |gamma| the coordinate sum.
 */
Motive a_m_sum(const Polyhedron& p, long m);

/**
 * Bounded-below summation domain declared as a finite union of pieces
 * (bounded base) x (simplicial integer recession cone): the lattice points
 * are base points plus nonnegative integer combinations of rays / m. Each
 * ray r contributes a geometric factor 1/(1 - L^(-|r|)), so every ray must
 * have positive coordinate sum (raises Unbounded otherwise).
 */
struct ConicalPiece {
  Polyhedron base;
  std::vector<std::vector<long>> rays;
};
Motive a_m_sum_conical(const std::vector<ConicalPiece>& pieces, long m);

/** Affine weight gamma -> w . gamma + w0. */
struct AffineWeight {
  std::vector<Rat> w;
  Rat w0;
};

/**
 * Graded variant: each point contributes L^(-m(|gamma| + e)) (L-1)^n with
 * e its weight value, and the term is dropped unless m e is a nonnegative
 * integer. Conical pieces require the weight to be constant along every ray
 * (raises InfiniteGrading otherwise).
 */
Motive graded_a_m_sum(const Polyhedron& base, const AffineWeight& l, long m);
Motive graded_a_m_sum_conical(const std::vector<ConicalPiece>& pieces,
                              const AffineWeight& l, long m);

/**
 * o-minimal Euler characteristic: the polyhedron is partitioned into
 * relatively open convex cells indexed by the strict/equality sign pattern
 * of its constraints; each nonempty cell of dimension k contributes (-1)^k.
 * Requires dim <= 3 (raises DimensionTooLarge).
 */
long euler_char(const Polyhedron& p);

/**
 * Integral of a piecewise-constant function against dchi: sum of
 * c_i * chi(piece_i) over pairwise disjoint pieces in one common ambient
 * dimension (raises OverlappingPieces otherwise).
 */
Motive integrate_dchi(const std::vector<std::pair<Polyhedron, Motive>>& pieces);

} // namespace motzeta

#endif
