#include "motzeta/series.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

std::string Generator::str() const {
  std::ostringstream os;
  os << "gen(" << e << "," << i << ")";
  return os.str();
}

RationalSeries RationalSeries::from_motive(const Motive& c) {
  RationalSeries s;
  s.add_poly(0, c);
  return s;
}

RationalSeries RationalSeries::monomial(const Motive& c, long m) {
  RationalSeries s;
  s.add_poly(m, c);
  return s;
}

RationalSeries RationalSeries::generator(const Generator& g, const Motive& c) {
  return product_key({g}, c);
}

RationalSeries RationalSeries::product_key(const std::vector<Generator>& gens, const Motive& c) {
  RationalSeries s;
  s.add_term(0, gens, c);
  return s;
}

void RationalSeries::add_poly(long m, const Motive& c) {
  if (m < 0) raise(ErrorCode::ValidationError, "negative T-exponent");
  auto it = poly_.find(m);
  if (it == poly_.end()) {
    if (!c.is_zero()) poly_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) poly_.erase(it);
}

void RationalSeries::add_key(const SeriesKey& k, const Motive& c) {
  auto it = rat_.find(k);
  if (it == rat_.end()) {
    if (!c.is_zero()) rat_.emplace(k, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) rat_.erase(it);
}

void RationalSeries::add_term(long shift, std::vector<Generator> gens, const Motive& c) {
  if (c.is_zero()) return;
  for (auto& g : gens)
    if (g.i < 1) raise(ErrorCode::ValidationError, "generator T-step must be positive");
  std::sort(gens.begin(), gens.end());
  if (gens.empty()) {
    add_poly(shift, c);
    return;
  }
  if (shift == 0) {
    add_key({gens, 0}, c);
    return;
  }
  // T^i * g = L^-e * g - T^i for g = gen(e, i); applied with the smallest
  // absorbing generator, recursing on (smaller shift, same gens) and
  // (same shift, fewer gens).
  auto pick = gens.end();
  for (auto it = gens.begin(); it != gens.end(); ++it)
    if (it->i <= shift) { pick = it; break; }
  if (pick == gens.end()) {
    add_key({gens, shift}, c);
    return;
  }
  Generator g = *pick;
  std::vector<Generator> rest = gens;
  rest.erase(rest.begin() + (pick - gens.begin()));
  add_term(shift - g.i, gens, c * Motive::lefschetz_pow(-g.e));
  add_term(shift, rest, -c);
}

RationalSeries RationalSeries::operator-() const {
  RationalSeries r;
  for (auto& [m, c] : poly_) r.poly_.emplace(m, -c);
  for (auto& [k, c] : rat_) r.rat_.emplace(k, -c);
  return r;
}

RationalSeries RationalSeries::operator+(const RationalSeries& o) const {
  RationalSeries r = *this;
  for (auto& [m, c] : o.poly_) r.add_poly(m, c);
  for (auto& [k, c] : o.rat_) r.add_key(k, c);
  return r;
}

RationalSeries RationalSeries::operator-(const RationalSeries& o) const { return *this + (-o); }

RationalSeries RationalSeries::operator*(const RationalSeries& o) const {
  RationalSeries r;
  for (auto& [m1, c1] : poly_)
    for (auto& [m2, c2] : o.poly_) r.add_poly(m1 + m2, c1 * c2);
  for (auto& [m1, c1] : poly_)
    for (auto& [k2, c2] : o.rat_) r.add_term(m1 + k2.shift, k2.gens, c1 * c2);
  for (auto& [k1, c1] : rat_)
    for (auto& [m2, c2] : o.poly_) r.add_term(k1.shift + m2, k1.gens, c1 * c2);
  for (auto& [k1, c1] : rat_)
    for (auto& [k2, c2] : o.rat_) {
      std::vector<Generator> gens = k1.gens;
      gens.insert(gens.end(), k2.gens.begin(), k2.gens.end());
      r.add_term(k1.shift + k2.shift, gens, c1 * c2);
    }
  return r;
}

RationalSeries RationalSeries::scale(const Motive& c) const {
  RationalSeries r;
  if (c.is_zero()) return r;
  for (auto& [m, v] : poly_) r.add_poly(m, v * c);
  for (auto& [k, v] : rat_) r.add_key(k, v * c);
  return r;
}

bool RationalSeries::equals(const RationalSeries& o) const {
  if (poly_.size() != o.poly_.size() || rat_.size() != o.rat_.size()) return false;
  for (auto it = poly_.begin(), jt = o.poly_.begin(); it != poly_.end(); ++it, ++jt)
    if (it->first != jt->first || it->second != jt->second) return false;
  for (auto it = rat_.begin(), jt = o.rat_.begin(); it != rat_.end(); ++it, ++jt)
    if (!(it->first == jt->first) || it->second != jt->second) return false;
  return true;
}

namespace {

// Sum of L^(sum k_j e_j) over k_j >= 1 with sum k_j i_j = m, enumerated
// positionally over the multiset.
void compositions(const std::vector<Generator>& gens, size_t idx, long rem, long lexp,
                  LaurentPoly& acc) {
  if (idx + 1 == gens.size()) {
    const auto& g = gens[idx];
    if (rem >= g.i && rem % g.i == 0) {
      long k = rem / g.i;
      acc = acc + LaurentPoly::monomial(Int(1), lexp + k * g.e);
    }
    return;
  }
  const auto& g = gens[idx];
  for (long k = 1; k * g.i <= rem - static_cast<long>(gens.size() - idx - 1); ++k)
    compositions(gens, idx + 1, rem - k * g.i, lexp + k * g.e, acc);
}

} // namespace

Motive RationalSeries::coefficient(long m) const {
  if (m < 0) raise(ErrorCode::ValidationError, "negative T-exponent");
  Motive acc(0);
  auto it = poly_.find(m);
  if (it != poly_.end()) acc += it->second;
  for (auto& [k, c] : rat_) {
    long rem = m - k.shift;
    if (rem < static_cast<long>(k.gens.size())) continue;
    LaurentPoly sum;
    compositions(k.gens, 0, rem, 0, sum);
    if (!sum.is_zero()) acc += c * Motive(sum);
  }
  return acc;
}

Motive RationalSeries::limit() const {
  for (auto& [m, c] : poly_)
    if (m > 0 && !c.is_zero())
      raise(ErrorCode::NonvanishingPolyPart,
            "limit undefined: polynomial part has a nonzero term at T^" + std::to_string(m));
  for (auto& [k, c] : rat_)
    if (k.shift > 0 && !c.is_zero())
      raise(ErrorCode::NonvanishingPolyPart,
            "limit undefined: summand carries an unabsorbed T-shift");
  Motive acc(0);
  auto it = poly_.find(0);
  if (it != poly_.end()) acc += it->second;
  for (auto& [k, c] : rat_)
    acc += (k.gens.size() % 2 == 0) ? c : -c;
  return acc;
}

RationalSeries RationalSeries::hadamard(const RationalSeries& a, const RationalSeries& b) {
  for (auto* s : {&a, &b})
    for (auto& [k, c] : s->rat_)
      if (k.gens.size() != 1 || k.shift != 0)
        raise(ErrorCode::UnsupportedShape,
              "Hadamard product supports polynomial parts and single generators only");
  RationalSeries r;
  for (auto& [m1, c1] : a.poly_) {
    for (auto& [m2, c2] : b.poly_)
      if (m1 == m2) r.add_poly(m1, c1 * c2);
    for (auto& [k2, c2] : b.rat_) {
      const Generator& g = k2.gens[0];
      if (m1 >= g.i && m1 % g.i == 0)
        r.add_poly(m1, c1 * c2 * Motive::lefschetz_pow((m1 / g.i) * g.e));
    }
  }
  for (auto& [k1, c1] : a.rat_) {
    const Generator& g1 = k1.gens[0];
    for (auto& [m2, c2] : b.poly_)
      if (m2 >= g1.i && m2 % g1.i == 0)
        r.add_poly(m2, c1 * c2 * Motive::lefschetz_pow((m2 / g1.i) * g1.e));
    for (auto& [k2, c2] : b.rat_) {
      const Generator& g2 = k2.gens[0];
      long I = std::lcm(g1.i, g2.i);
      Generator g{(I / g1.i) * g1.e + (I / g2.i) * g2.e, I};
      r.add_key({{g}, 0}, c1 * c2);
    }
  }
  return r;
}

std::string RationalSeries::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  for (auto& [m, c] : poly_) {
    sep();
    os << "(" << c.str() << ")";
    if (m > 0) {
      os << "*T";
      if (m != 1) os << "^" << m;
    }
  }
  for (auto& [k, c] : rat_) {
    sep();
    bool one = c.is_polynomial() && c.num().is_one();
    if (!one) os << "(" << c.str() << ")*";
    bool inner_first = true;
    if (k.shift > 0) {
      os << "T";
      if (k.shift != 1) os << "^" << k.shift;
      inner_first = false;
    }
    for (auto& g : k.gens) {
      if (!inner_first) os << "*";
      inner_first = false;
      os << g.str();
    }
  }
  return os.str();
}

} // namespace motzeta
