#include "motzeta/polyhedra.hpp"

#include <algorithm>
#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

namespace {

void check_shape(const Polyhedron& p) {
  for (auto& c : p.cons)
    if (static_cast<int>(c.a.size()) != p.dim)
      raise(ErrorCode::ValidationError, "constraint arity does not match dimension");
}

/** Internal inequality form: a . x + b REL 0 with REL in {>=, >}; equalities
 *  are split into two >= rows. */
struct Row {
  std::vector<Rat> a;
  Rat b;
  bool strict = false;
};

std::vector<Row> to_rows(const Polyhedron& p) {
  std::vector<Row> rows;
  for (auto& c : p.cons) {
    Row r{c.a, -c.b, c.rel == Constraint::Rel::Gt};
    rows.push_back(r);
    if (c.rel == Constraint::Rel::Eq) {
      Row s;
      s.a.reserve(c.a.size());
      for (auto& x : c.a) s.a.push_back(-x);
      s.b = c.b;
      s.strict = false;
      rows.push_back(s);
    }
  }
  return rows;
}

/** Eliminates variable v by Fourier-Motzkin; preserves satisfiability and
 *  projections onto the remaining variables. */
std::vector<Row> eliminate(const std::vector<Row>& rows, int v) {
  std::vector<const Row*> pos, neg;
  std::vector<Row> out;
  for (auto& r : rows) {
    if (r.a[v] > 0)
      pos.push_back(&r);
    else if (r.a[v] < 0)
      neg.push_back(&r);
    else
      out.push_back(r);
  }
  for (auto* pr : pos)
    for (auto* nr : neg) {
      // pr: a_v x_v >= -rest  with a_v > 0, nr: a_v' x_v >= -rest' with a_v' < 0
      // combine: (-a_v') * pr + a_v * nr eliminates x_v.
      Rat cp = -nr->a[v]; // > 0
      Rat cn = pr->a[v];  // > 0
      Row r;
      r.a.resize(pr->a.size());
      for (size_t j = 0; j < r.a.size(); ++j) r.a[j] = cp * pr->a[j] + cn * nr->a[j];
      r.b = cp * pr->b + cn * nr->b;
      r.strict = pr->strict || nr->strict;
      out.push_back(std::move(r));
    }
  return out;
}

bool rows_feasible_trivial(const std::vector<Row>& rows) {
  // All-zero coefficient rows decide feasibility directly.
  for (auto& r : rows) {
    bool allzero = true;
    for (auto& x : r.a)
      if (x != 0) {
        allzero = false;
        break;
      }
    if (!allzero) continue;
    if (r.strict ? !(r.b > 0) : !(r.b >= 0)) return false;
  }
  return true;
}

bool rows_empty(std::vector<Row> rows, int dim) {
  for (int v = 0; v < dim; ++v) {
    if (!rows_feasible_trivial(rows)) return true;
    rows = eliminate(rows, v);
  }
  return !rows_feasible_trivial(rows);
}

/** Substitute x_v = value, dropping the coordinate. */
Polyhedron substitute(const Polyhedron& p, int v, const Rat& value) {
  Polyhedron q;
  q.dim = p.dim - 1;
  for (auto& c : p.cons) {
    Constraint d;
    d.rel = c.rel;
    d.b = c.b - c.a[v] * value;
    for (int j = 0; j < p.dim; ++j)
      if (j != v) d.a.push_back(c.a[j]);
    q.cons.push_back(std::move(d));
  }
  return q;
}

bool point_satisfies(const Polyhedron& p, const std::vector<Rat>& x) {
  for (auto& c : p.cons) {
    Rat lhs(0);
    for (int j = 0; j < p.dim; ++j) lhs += c.a[j] * x[j];
    switch (c.rel) {
      case Constraint::Rel::Ge:
        if (!(lhs >= c.b)) return false;
        break;
      case Constraint::Rel::Gt:
        if (!(lhs > c.b)) return false;
        break;
      case Constraint::Rel::Eq:
        if (lhs != c.b) return false;
        break;
    }
  }
  return true;
}

Int rat_floor(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

Int rat_ceil(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

void enumerate_rec(const Polyhedron& p, long m, std::vector<Rat>& prefix,
                   std::vector<std::vector<Rat>>& out) {
  if (p.dim == 0) {
    if (point_satisfies(p, {})) out.push_back(prefix);
    return;
  }
  if (polyhedron_empty(p)) return;
  CoordBounds b = coordinate_bounds(p, 0);
  if (!b.lo || !b.hi) raise(ErrorCode::Unbounded, "coordinate unbounded during enumeration");
  Int k = rat_ceil(*b.lo * m);
  Int kend = rat_floor(*b.hi * m);
  for (; k <= kend; ++k) {
    Rat val(k, m);
    val.canonicalize();
    prefix.push_back(val);
    enumerate_rec(substitute(p, 0, val), m, prefix, out);
    prefix.pop_back();
  }
}

long rank_of(std::vector<std::vector<Rat>> rows) {
  long rank = 0;
  size_t cols = rows.empty() ? 0 : rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    for (size_t j = r + 1; j < rows.size(); ++j) {
      if (rows[j][c] == 0) continue;
      Rat f = rows[j][c] / rows[r][c];
      for (size_t k2 = c; k2 < cols; ++k2) rows[j][k2] -= f * rows[r][k2];
    }
    ++r;
    ++rank;
  }
  return rank;
}

/** Canonicalize scaling (first nonzero coefficient +-1) and drop exact
 *  duplicates; keeps the cell decomposition small. */
std::vector<Constraint> dedupe(const std::vector<Constraint>& cons) {
  std::vector<Constraint> out;
  for (auto c : cons) {
    Rat scale(0);
    for (auto& x : c.a)
      if (x != 0) {
        scale = abs(x);
        break;
      }
    if (scale != 0) {
      for (auto& x : c.a) x /= scale;
      c.b /= scale;
    }
    bool dup = false;
    for (auto& d : out)
      if (d.rel == c.rel && d.b == c.b && d.a == c.a) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

Motive monomial_motive(long e) { return Motive(LaurentPoly::monomial(Int(1), e)); }

/** L^(-m|gamma|) for a lattice point; the exponent is exactly integral. */
long weight_exponent(const std::vector<Rat>& gamma, long m, const Rat& extra) {
  Rat s = extra;
  for (auto& x : gamma) s += x;
  Rat e = s * m;
  if (e.get_den() != 1)
    raise(ErrorCode::ValidationError, "non-integral weight exponent");
  if (!e.get_num().fits_slong_p())
    raise(ErrorCode::ValidationError, "weight exponent out of range");
  return -e.get_num().get_si();
}

Motive ray_factor(const std::vector<long>& ray) {
  long s = 0;
  for (long x : ray) s += x;
  if (s <= 0)
    raise(ErrorCode::Unbounded, "recession ray with nonpositive coordinate sum");
  // 1/(1 - L^-s) = -L^s / (1 - L^s)
  return Motive::fraction(-LaurentPoly::monomial(Int(1), s), {{s, 1}});
}

Motive conical_sum(const std::vector<ConicalPiece>& pieces, long m,
                   const AffineWeight* l) {
  Motive total(0);
  for (auto& piece : pieces) {
    check_shape(piece.base);
    int n = piece.base.dim;
    for (auto& ray : piece.rays) {
      if (static_cast<int>(ray.size()) != n)
        raise(ErrorCode::ValidationError, "ray arity does not match dimension");
      if (l) {
        Rat dot(0);
        for (int j = 0; j < n; ++j) dot += l->w[j] * ray[j];
        if (dot != 0)
          raise(ErrorCode::InfiniteGrading, "weight varies along a recession ray");
      }
    }
    Motive factor = Motive(1);
    for (auto& ray : piece.rays) factor *= ray_factor(ray);
    Motive base_sum(0);
    for (auto& gamma : lattice_points(piece.base, m)) {
      Rat extra(0);
      if (l) {
        Rat e = l->w0;
        for (int j = 0; j < n; ++j) e += l->w[j] * gamma[j];
        Rat me = e * m;
        if (me.get_den() != 1 || me < 0) continue; // term defined to vanish
        extra = e;
      }
      base_sum += monomial_motive(weight_exponent(gamma, m, extra));
    }
    Motive unit = Motive::lefschetz() - Motive(1);
    total += base_sum * factor * unit.pow(n);
  }
  return total;
}

} // namespace

bool polyhedron_empty(const Polyhedron& p) {
  check_shape(p);
  return rows_empty(to_rows(p), p.dim);
}

CoordBounds coordinate_bounds(const Polyhedron& p, int v) {
  check_shape(p);
  std::vector<Row> rows = to_rows(p);
  // Move coordinate v to the front, then eliminate everything else.
  for (auto& r : rows) std::swap(r.a[0], r.a[v]);
  for (int j = 1; j < p.dim; ++j) rows = eliminate(rows, j);
  CoordBounds b;
  for (auto& r : rows) {
    if (r.a[0] > 0) { // x >= -b / a, a lower bound
      Rat bound = -r.b / r.a[0];
      if (!b.lo || bound > *b.lo) b.lo = bound;
    } else if (r.a[0] < 0) {
      Rat bound = -r.b / r.a[0];
      if (!b.hi || bound < *b.hi) b.hi = bound;
    }
  }
  return b;
}

std::vector<std::vector<Rat>> lattice_points(const Polyhedron& p, long m) {
  check_shape(p);
  if (m < 1) raise(ErrorCode::ValidationError, "lattice denominator must be positive");
  std::vector<std::vector<Rat>> out;
  if (p.dim > 0 && polyhedron_empty(p)) return out;
  std::vector<Rat> prefix;
  enumerate_rec(p, m, prefix, out);
  return out;
}

Motive a_m_sum(const Polyhedron& p, long m) {
  Motive sum(0);
  for (auto& gamma : lattice_points(p, m))
    sum += monomial_motive(weight_exponent(gamma, m, Rat(0)));
  Motive unit = Motive::lefschetz() - Motive(1);
  return sum * unit.pow(p.dim);
}

Motive a_m_sum_conical(const std::vector<ConicalPiece>& pieces, long m) {
  return conical_sum(pieces, m, nullptr);
}

Motive graded_a_m_sum(const Polyhedron& base, const AffineWeight& l, long m) {
  if (static_cast<int>(l.w.size()) != base.dim)
    raise(ErrorCode::ValidationError, "weight arity does not match dimension");
  std::vector<ConicalPiece> pieces{{base, {}}};
  return conical_sum(pieces, m, &l);
}

Motive graded_a_m_sum_conical(const std::vector<ConicalPiece>& pieces,
                              const AffineWeight& l, long m) {
  return conical_sum(pieces, m, &l);
}

long euler_char(const Polyhedron& p) {
  check_shape(p);
  if (p.dim > 3) raise(ErrorCode::DimensionTooLarge, "euler characteristic limited to dimension 3");
  std::vector<Constraint> cons = dedupe(p.cons);
  // Cells are indexed by tightness patterns: each weak inequality is either
  // met with equality or strictly; strict and equality constraints admit one
  // option. Every point of p lies in exactly one cell, each nonempty cell is
  // relatively open and convex, and an open k-cell contributes (-1)^k.
  std::vector<size_t> weak;
  for (size_t j = 0; j < cons.size(); ++j)
    if (cons[j].rel == Constraint::Rel::Ge) weak.push_back(j);
  if (weak.size() > 20)
    raise(ErrorCode::ValidationError, "too many weak constraints for cell enumeration");
  long chi = 0;
  for (size_t mask = 0; mask < (size_t{1} << weak.size()); ++mask) {
    Polyhedron cell;
    cell.dim = p.dim;
    cell.cons = cons;
    for (size_t t = 0; t < weak.size(); ++t)
      cell.cons[weak[t]].rel =
          (mask >> t) & 1 ? Constraint::Rel::Eq : Constraint::Rel::Gt;
    if (polyhedron_empty(cell)) continue;
    std::vector<std::vector<Rat>> eqrows;
    for (auto& c : cell.cons)
      if (c.rel == Constraint::Rel::Eq) eqrows.push_back(c.a);
    long dim = p.dim - rank_of(std::move(eqrows));
    chi += (dim % 2 == 0) ? 1 : -1;
  }
  return chi;
}

Motive integrate_dchi(const std::vector<std::pair<Polyhedron, Motive>>& pieces) {
  for (size_t i = 0; i < pieces.size(); ++i)
    for (size_t j = i + 1; j < pieces.size(); ++j) {
      if (pieces[i].first.dim != pieces[j].first.dim)
        raise(ErrorCode::ValidationError, "pieces live in different ambient dimensions");
      Polyhedron meet = pieces[i].first;
      for (auto& c : pieces[j].first.cons) meet.cons.push_back(c);
      if (!polyhedron_empty(meet))
        raise(ErrorCode::OverlappingPieces, "pieces overlap");
    }
  Motive sum(0);
  for (auto& [poly, c] : pieces) sum += c * Motive(euler_char(poly));
  return sum;
}

} // namespace motzeta
