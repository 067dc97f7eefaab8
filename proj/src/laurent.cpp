#include "motzeta/laurent.hpp"

#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

Rat rat_pow(const Rat& q, long e) {
  if (e == 0) return Rat(1);
  if (q == 0 && e < 0) raise(ErrorCode::PoleAtQ, "0 raised to a negative power");
  Rat base = e > 0 ? q : Rat(1) / q;
  unsigned long n = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
  Rat acc(1);
  while (n) {
    if (n & 1) acc *= base;
    base *= base;
    n >>= 1;
  }
  return acc;
}

LaurentPoly LaurentPoly::monomial(const Int& c, long e) {
  LaurentPoly p;
  p.set_term(e, c);
  return p;
}

LaurentPoly LaurentPoly::one_minus_power(long i) {
  LaurentPoly p;
  p.set_term(0, Int(1));
  p.set_term(i, Int(-1));
  return p;
}

bool LaurentPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
}

std::optional<std::pair<Int, long>> LaurentPoly::as_monomial() const {
  if (terms_.size() != 1) return std::nullopt;
  return std::make_pair(terms_.begin()->second, terms_.begin()->first);
}

Int LaurentPoly::coeff(long e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Int(0) : it->second;
}

void LaurentPoly::set_term(long e, const Int& c) {
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

long LaurentPoly::min_exp() const { return terms_.begin()->first; }
long LaurentPoly::max_exp() const { return terms_.rbegin()->first; }

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r;
  for (auto& [e, c] : terms_) r.terms_[e] = -c;
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly r = *this;
  for (auto& [e, c] : o.terms_) {
    Int s = r.coeff(e) + c;
    r.set_term(e, s);
  }
  return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly r;
  for (auto& [e1, c1] : terms_)
    for (auto& [e2, c2] : o.terms_) {
      long e = e1 + e2;
      Int s = r.coeff(e) + c1 * c2;
      r.set_term(e, s);
    }
  return r;
}

std::optional<LaurentPoly> LaurentPoly::divide_exact(const LaurentPoly& d) const {
  if (d.is_zero()) return std::nullopt;
  if (is_zero()) return LaurentPoly();
  LaurentPoly rem = *this;
  LaurentPoly quot;
  const long dtop = d.max_exp();
  // An exact quotient has min exponent exactly min_exp() - d.min_exp(): the
  // bottom term of quot*d is a single product and cannot cancel. Falling
  // below it proves non-divisibility (and bounds the loop).
  const long qmin = min_exp() - d.min_exp();
  const Int& dlead = d.terms().rbegin()->second;
  while (!rem.is_zero()) {
    long rtop = rem.max_exp();
    if (rtop - dtop < qmin) return std::nullopt;
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem.coeff(rtop).get_mpz_t(), dlead.get_mpz_t());
    if (r != 0) return std::nullopt;
    LaurentPoly m = monomial(q, rtop - dtop);
    quot = quot + m;
    rem = rem - m * d;
    if (!rem.is_zero() && rem.max_exp() >= rtop) return std::nullopt;
  }
  return quot;
}

Rat LaurentPoly::eval(const Rat& q) const {
  Rat acc(0);
  for (auto& [e, c] : terms_) acc += Rat(c) * rat_pow(q, e);
  return acc;
}

std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    long e = it->first;
    Int c = it->second;
    bool neg = c < 0;
    Int a = neg ? Int(-c) : c;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    if (e == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "L";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

} // namespace motzeta
