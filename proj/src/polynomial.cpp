#include "motzeta/polynomial.hpp"

#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

IntPolynomial IntPolynomial::constant(int nvars, const Int& c) {
  IntPolynomial p(nvars);
  p.add_term(Exps(nvars, 0), c);
  return p;
}

IntPolynomial IntPolynomial::variable(int nvars, int v) {
  IntPolynomial p(nvars);
  Exps e(nvars, 0);
  e.at(v) = 1;
  p.add_term(e, Int(1));
  return p;
}

void IntPolynomial::add_term(const Exps& e, const Int& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
  IntPolynomial r = *this;
  for (auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

IntPolynomial IntPolynomial::operator-() const {
  IntPolynomial r(nvars_);
  for (auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const {
  return *this + (-o);
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
  IntPolynomial r(nvars_);
  for (auto& [ea, ca] : terms_)
    for (auto& [eb, cb] : o.terms_) {
      Exps e = ea;
      for (int v = 0; v < nvars_; ++v) e[v] += eb[v];
      r.add_term(e, ca * cb);
    }
  return r;
}

IntPolynomial IntPolynomial::pow(long e) const {
  if (e < 0) raise(ErrorCode::ValidationError, "negative polynomial power");
  IntPolynomial r = constant(nvars_, Int(1));
  for (long j = 0; j < e; ++j) r = r * *this;
  return r;
}

IntPolynomial IntPolynomial::partial(int v) const {
  IntPolynomial r(nvars_);
  for (auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Exps d = e;
    d[v] -= 1;
    r.add_term(d, c * Int(e[v]));
  }
  return r;
}

IntPolynomial IntPolynomial::substitute_zero(const std::vector<int>& zeroed) const {
  IntPolynomial r(nvars_);
  for (auto& [e, c] : terms_) {
    bool keep = true;
    for (int v : zeroed)
      if (e[v] != 0) {
        keep = false;
        break;
      }
    if (keep) r.add_term(e, c);
  }
  return r;
}

IntPolynomial IntPolynomial::scale_variable(int v, const Int& c) const {
  IntPolynomial r(nvars_);
  for (auto& [e, coef] : terms_) {
    Int s = coef;
    for (unsigned j = 0; j < e[v]; ++j) s *= c;
    r.add_term(e, s);
  }
  return r;
}

IntPolynomial IntPolynomial::restrict_to(const std::vector<int>& keep) const {
  std::vector<int> pos(nvars_, -1);
  for (size_t j = 0; j < keep.size(); ++j) pos.at(keep[j]) = static_cast<int>(j);
  IntPolynomial r(static_cast<int>(keep.size()));
  for (auto& [e, c] : terms_) {
    Exps ne(keep.size(), 0);
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      if (pos[v] < 0)
        raise(ErrorCode::ValidationError, "polynomial uses a variable outside the restriction");
      ne[pos[v]] = e[v];
    }
    r.add_term(ne, c);
  }
  return r;
}

bool IntPolynomial::uses_variable(int v) const {
  for (auto& [e, c] : terms_)
    if (e[v] != 0) return true;
  return false;
}

long IntPolynomial::total_degree() const {
  long d = -1;
  for (auto& [e, c] : terms_) {
    long t = 0;
    for (unsigned x : e) t += x;
    d = std::max(d, t);
  }
  return d;
}

Int IntPolynomial::eval(const std::vector<Int>& x) const {
  Int acc = 0;
  for (auto& [e, c] : terms_) {
    Int t = c;
    for (int v = 0; v < nvars_; ++v)
      for (unsigned j = 0; j < e[v]; ++j) t *= x[v];
    acc += t;
  }
  return acc;
}

long IntPolynomial::block_degree(const Exps& e, int lo, int hi) {
  long d = 0;
  for (int v = lo; v < hi && v < static_cast<int>(e.size()); ++v) d += e[v];
  return d;
}

std::string IntPolynomial::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Stable order: the map's exponent-vector order.
  for (auto& [e, c] : terms_) {
    Int a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool any_var = false;
    std::ostringstream vs;
    for (int v = 0; v < nvars_; ++v) {
      if (e[v] == 0) continue;
      if (any_var) vs << "*";
      any_var = true;
      vs << names.at(v);
      if (e[v] > 1) vs << "^" << e[v];
    }
    if (!any_var) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << vs.str();
    }
  }
  return os.str();
}

} // namespace motzeta
