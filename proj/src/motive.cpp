#include "motzeta/motive.hpp"

#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

Motive Motive::fraction(const LaurentPoly& p, const std::map<long, int>& den) {
  Motive m;
  m.num_ = p;
  for (auto& [i, k] : den) {
    if (i <= 0 || k < 0) raise(ErrorCode::ValidationError, "denominator exponents must be positive");
    if (k > 0) m.den_[i] = k;
  }
  m.normalize();
  return m;
}

void Motive::normalize() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  bool progress = true;
  while (progress) {
    progress = false;
    for (auto it = den_.rbegin(); it != den_.rend(); ++it) {
      auto q = num_.divide_exact(LaurentPoly::one_minus_power(it->first));
      if (q) {
        num_ = *q;
        if (--it->second == 0) den_.erase(it->first);
        progress = true;
        break;
      }
    }
  }
}

LaurentPoly Motive::den_poly() const {
  LaurentPoly d(1);
  for (auto& [i, k] : den_)
    for (int j = 0; j < k; ++j) d = d * LaurentPoly::one_minus_power(i);
  return d;
}

Motive Motive::operator-() const {
  Motive r = *this;
  r.num_ = -r.num_;
  return r;
}

Motive Motive::operator+(const Motive& o) const {
  // Common denominator: union of multisets by max multiplicity.
  std::map<long, int> den;
  for (auto& [i, k] : den_) den[i] = k;
  for (auto& [i, k] : o.den_) den[i] = std::max(den[i], k);
  LaurentPoly lhs = num_, rhs = o.num_;
  for (auto& [i, k] : den) {
    auto at = den_.find(i);
    auto bt = o.den_.find(i);
    int ka = at == den_.end() ? 0 : at->second;
    int kb = bt == o.den_.end() ? 0 : bt->second;
    for (int j = ka; j < k; ++j) lhs = lhs * LaurentPoly::one_minus_power(i);
    for (int j = kb; j < k; ++j) rhs = rhs * LaurentPoly::one_minus_power(i);
  }
  Motive r;
  r.num_ = lhs + rhs;
  r.den_ = den;
  r.normalize();
  return r;
}

Motive Motive::operator-(const Motive& o) const { return *this + (-o); }

Motive Motive::operator*(const Motive& o) const {
  Motive r;
  r.num_ = num_ * o.num_;
  r.den_ = den_;
  for (auto& [i, k] : o.den_) r.den_[i] += k;
  r.normalize();
  return r;
}

namespace {

/** d-th cyclotomic polynomial, by the recursive exact-division formula. */
const LaurentPoly& cyclotomic(long d) {
  static std::map<long, LaurentPoly> cache;
  auto it = cache.find(d);
  if (it != cache.end()) return it->second;
  LaurentPoly p = LaurentPoly::monomial(Int(1), d) - LaurentPoly(1);
  for (long e = 1; e < d; ++e)
    if (d % e == 0) p = *p.divide_exact(cyclotomic(e));
  return cache.emplace(d, p).first->second;
}

} // namespace

std::optional<Motive> Motive::inverse() const {
  if (num_.is_zero()) return std::nullopt;
  // Strip cyclotomic factors from the numerator.  Invertible numerators are
  // exactly +-L^a * prod_d Phi_d^{m_d}; each Phi_d then contributes a factor
  // (1 - L^d)^{m_d} to the inverse's denominator (whose extra lower-order
  // cyclotomics move into the inverse's numerator by exact division).
  LaurentPoly work = num_;
  std::map<long, int> mult;
  long span = work.max_exp() - work.min_exp();
  long dmax = 2 * span * span + 6; // phi(d) >= sqrt(d/2), so larger d cannot divide
  for (long d = 1; d <= dmax && work.max_exp() > work.min_exp(); ++d) {
    while (auto q = work.divide_exact(cyclotomic(d))) {
      work = *q;
      ++mult[d];
    }
  }
  auto mono = work.as_monomial();
  if (!mono || (mono->first != 1 && mono->first != -1)) return std::nullopt;
  LaurentPoly prod(1);
  for (auto& [d, k] : mult)
    for (int j = 0; j < k; ++j) prod = prod * LaurentPoly::one_minus_power(d);
  auto scaled = prod.divide_exact(num_); // exact by construction
  return Motive::fraction(*scaled * den_poly(), mult);
}

Motive Motive::pow(long e) const {
  if (e == 0) return Motive(1);
  if (e > 0) {
    Motive acc(1);
    for (long j = 0; j < e; ++j) acc *= *this;
    return acc;
  }
  auto inv = inverse();
  if (!inv) raise(ErrorCode::UnsupportedShape, "negative power of a non-invertible motive");
  Motive acc(1);
  for (long j = 0; j < -e; ++j) acc *= *inv;
  return acc;
}

bool Motive::equals(const Motive& o) const {
  return num_ * o.den_poly() == o.num_ * den_poly();
}

bool Motive::repr_less(const Motive& o) const {
  if (num_ != o.num_) return num_ < o.num_;
  return den_ < o.den_;
}

Rat Motive::specialize(const Rat& q) const {
  Rat d(1);
  for (auto& [i, k] : den_) {
    Rat f = Rat(1) - rat_pow(q, i);
    if (f == 0) {
      std::ostringstream os;
      os << "denominator factor 1 - q^" << i << " vanishes at q = " << q;
      raise(ErrorCode::PoleAtQ, os.str());
    }
    for (int j = 0; j < k; ++j) d *= f;
  }
  return num_.eval(q) / d;
}

std::string Motive::str() const {
  std::string n = num_.str();
  if (den_.empty()) return n;
  std::ostringstream os;
  if (num_.terms().size() > 1)
    os << "(" << n << ")";
  else
    os << n;
  os << "/";
  std::ostringstream ds;
  bool first = true;
  int nfac = 0;
  for (auto& [i, k] : den_) {
    nfac += k;
    if (!first) ds << "*";
    first = false;
    ds << "(1 - L";
    if (i != 1) ds << "^" << i;
    ds << ")";
    if (k > 1) ds << "^" << k;
  }
  bool wrap = nfac > 1 || den_.begin()->second > 1;
  if (wrap)
    os << "(" << ds.str() << ")";
  else
    os << ds.str();
  return os.str();
}

} // namespace motzeta
