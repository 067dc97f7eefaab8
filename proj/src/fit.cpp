#include "motzeta/fit.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

namespace {

void compositions(const BasisKey& gens, size_t idx, long rem, long lexp, LaurentPoly& acc) {
  if (idx + 1 == gens.size()) {
    const auto& g = gens[idx];
    if (rem >= g.i && rem % g.i == 0)
      acc = acc + LaurentPoly::monomial(Int(1), lexp + (rem / g.i) * g.e);
    return;
  }
  const auto& g = gens[idx];
  for (long k = 1; k * g.i <= rem; ++k)
    compositions(gens, idx + 1, rem - k * g.i, lexp + k * g.e, acc);
}

// Fraction of Laurent polynomials, reduced just enough to keep elimination
// sizes tame: monomial content stripped, denominator sign fixed, full exact
// division applied when it happens to go through.
struct Frac {
  LaurentPoly num;
  LaurentPoly den = LaurentPoly(1);

  static Frac of(const LaurentPoly& p) { return {p, LaurentPoly(1)}; }

  bool is_zero() const { return num.is_zero(); }

  void reduce() {
    if (num.is_zero()) {
      den = LaurentPoly(1);
      return;
    }
    long base = std::min(num.min_exp(), den.min_exp());
    if (base != 0) {
      LaurentPoly shift = LaurentPoly::monomial(Int(1), -base);
      num = num * shift;
      den = den * shift;
    }
    if (auto q = num.divide_exact(den)) {
      num = *q;
      den = LaurentPoly(1);
    }
    if (den.terms().rbegin()->second < 0) {
      num = -num;
      den = -den;
    }
  }

  Frac operator+(const Frac& o) const {
    Frac r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  Frac operator-(const Frac& o) const {
    Frac r{num * o.den - o.num * den, den * o.den};
    r.reduce();
    return r;
  }
  Frac operator*(const Frac& o) const {
    Frac r{num * o.num, den * o.den};
    r.reduce();
    return r;
  }
  Frac operator/(const Frac& o) const {
    Frac r{num * o.den, den * o.num};
    r.reduce();
    return r;
  }
};

// Converts num/den to a Motive by factoring the denominator into
// +-L^a * prod (1 - L^i); loud failure when it does not factor that way.
Motive frac_to_motive(const Frac& f) {
  LaurentPoly num = f.num, den = f.den;
  std::map<long, int> factors;
  bool progress = true;
  while (progress && !(den.terms().size() == 1)) {
    progress = false;
    long span = den.max_exp() - den.min_exp();
    for (long i = span; i >= 1; --i) {
      if (auto q = den.divide_exact(LaurentPoly::one_minus_power(i))) {
        den = *q;
        ++factors[i];
        progress = true;
        break;
      }
    }
  }
  auto mono = den.as_monomial();
  if (!mono)
    raise(ErrorCode::UnsupportedShape,
          "fit coefficient denominator does not factor into 1 - L^i terms");
  // num / (c L^a) with c integer: c must divide the numerator.
  LaurentPoly scaled = num * LaurentPoly::monomial(Int(1), -mono->second);
  LaurentPoly adj;
  for (auto& [e, c] : scaled.terms()) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), mono->first.get_mpz_t());
    if (r != 0)
      raise(ErrorCode::UnsupportedShape, "fit coefficient is not integral over the localized ring");
    adj.set_term(e, q);
  }
  return Motive::fraction(adj, factors);
}

template <typename Field>
struct EliminationResult {
  bool inconsistent = false;
  bool underdetermined = false;
  std::vector<Field> solution;
};

// Gaussian elimination with exact field arithmetic; rows >= cols expected.
template <typename Field>
EliminationResult<Field> solve(std::vector<std::vector<Field>> a, std::vector<Field> b,
                               const Field& zero, const Field& one) {
  EliminationResult<Field> res;
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  std::vector<size_t> pivot_row(cols, SIZE_MAX);
  size_t rank = 0;
  for (size_t c = 0; c < cols && rank < rows; ++c) {
    size_t p = SIZE_MAX;
    for (size_t r = rank; r < rows; ++r)
      if (!a[r][c].is_zero()) { p = r; break; }
    if (p == SIZE_MAX) continue;
    std::swap(a[p], a[rank]);
    std::swap(b[p], b[rank]);
    Field inv = one / a[rank][c];
    for (size_t cc = c; cc < cols; ++cc) a[rank][cc] = a[rank][cc] * inv;
    b[rank] = b[rank] * inv;
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][c].is_zero()) continue;
      Field f = a[r][c];
      for (size_t cc = c; cc < cols; ++cc) a[r][cc] = a[r][cc] - f * a[rank][cc];
      b[r] = b[r] - f * b[rank];
    }
    pivot_row[c] = rank;
    ++rank;
  }
  for (size_t r = rank; r < rows; ++r)
    if (!b[r].is_zero()) {
      res.inconsistent = true;
      return res;
    }
  for (size_t c = 0; c < cols; ++c)
    if (pivot_row[c] == SIZE_MAX) {
      res.underdetermined = true;
      return res;
    }
  res.solution.assign(cols, zero);
  for (size_t c = 0; c < cols; ++c) res.solution[c] = b[pivot_row[c]];
  return res;
}

struct RatField {
  Rat v;
  bool is_zero() const { return v == 0; }
  RatField operator+(const RatField& o) const { return {v + o.v}; }
  RatField operator-(const RatField& o) const { return {v - o.v}; }
  RatField operator*(const RatField& o) const { return {v * o.v}; }
  RatField operator/(const RatField& o) const { return {v / o.v}; }
};

void check_fit_inputs(size_t ncoeffs, size_t nbasis) {
  if (nbasis == 0) raise(ErrorCode::ValidationError, "fit basis is empty");
  if (ncoeffs < nbasis + 1)
    raise(ErrorCode::ValidationError,
          "fit needs at least one more coefficient than basis entries");
}

std::vector<BasisKey> normalize_basis(std::vector<BasisKey> basis) {
  for (auto& key : basis) {
    if (key.empty()) raise(ErrorCode::ValidationError, "empty fit basis key");
    std::sort(key.begin(), key.end());
  }
  std::set<BasisKey> seen;
  for (auto& key : basis)
    if (!seen.insert(key).second)
      raise(ErrorCode::ValidationError, "duplicate fit basis key");
  return basis;
}

} // namespace

LaurentPoly basis_coefficient(const BasisKey& key, long m) {
  LaurentPoly acc;
  if (m >= static_cast<long>(key.size())) compositions(key, 0, m, 0, acc);
  return acc;
}

Rat basis_coefficient_at(const BasisKey& key, long m, const Rat& q) {
  return basis_coefficient(key, m).eval(q);
}

RationalSeries fit_series(const std::vector<std::pair<long, Motive>>& coeffs,
                          const std::vector<BasisKey>& basis_in) {
  auto basis = normalize_basis(basis_in);
  check_fit_inputs(coeffs.size(), basis.size());
  std::vector<std::vector<Frac>> a;
  std::vector<Frac> b;
  std::set<long> degrees;
  for (auto& [m, value] : coeffs) {
    if (m < 1) raise(ErrorCode::ValidationError, "fit coefficients start at T^1");
    if (!degrees.insert(m).second)
      raise(ErrorCode::ValidationError,
            "duplicate fit coefficient at T^" + std::to_string(m));
    if (!value.is_polynomial())
      raise(ErrorCode::ValidationError, "fit coefficient data must be Laurent polynomials");
    std::vector<Frac> row;
    row.reserve(basis.size());
    for (auto& key : basis) row.push_back(Frac::of(basis_coefficient(key, m)));
    a.push_back(std::move(row));
    b.push_back(Frac::of(value.num()));
  }
  auto res = solve<Frac>(a, b, Frac::of(LaurentPoly()), Frac::of(LaurentPoly(1)));
  if (res.inconsistent)
    raise(ErrorCode::Inconsistent, "no basis combination matches the supplied coefficients");
  if (res.underdetermined)
    raise(ErrorCode::Underdetermined, "coefficient data does not determine the basis combination");
  RationalSeries fitted;
  std::vector<Motive> cs;
  for (size_t k = 0; k < basis.size(); ++k) {
    Motive c = frac_to_motive(res.solution[k]);
    cs.push_back(c);
    fitted.add_term(0, basis[k], c);
  }
  for (auto& [m, value] : coeffs)
    if (fitted.coefficient(m) != Motive(value))
      raise(ErrorCode::Inconsistent, "fitted series fails verification at T^" + std::to_string(m));
  return fitted;
}

NumericFit fit_series_at(const std::vector<std::pair<long, Rat>>& coeffs,
                         const std::vector<BasisKey>& basis_in, const Rat& q) {
  auto basis = normalize_basis(basis_in);
  check_fit_inputs(coeffs.size(), basis.size());
  std::vector<std::vector<RatField>> a;
  std::vector<RatField> b;
  std::set<long> degrees;
  for (auto& [m, value] : coeffs) {
    if (m < 1) raise(ErrorCode::ValidationError, "fit coefficients start at T^1");
    if (!degrees.insert(m).second)
      raise(ErrorCode::ValidationError,
            "duplicate fit coefficient at T^" + std::to_string(m));
    std::vector<RatField> row;
    row.reserve(basis.size());
    for (auto& key : basis) row.push_back({basis_coefficient_at(key, m, q)});
    a.push_back(std::move(row));
    b.push_back({value});
  }
  auto res = solve<RatField>(a, b, RatField{Rat(0)}, RatField{Rat(1)});
  if (res.inconsistent)
    raise(ErrorCode::Inconsistent, "no basis combination matches the supplied coefficients");
  if (res.underdetermined)
    raise(ErrorCode::Underdetermined, "coefficient data does not determine the basis combination");
  NumericFit fit;
  fit.limit = Rat(0);
  for (size_t k = 0; k < basis.size(); ++k) {
    fit.coeffs.push_back(res.solution[k].v);
    fit.limit += (basis[k].size() % 2 == 0) ? res.solution[k].v : -res.solution[k].v;
  }
  for (auto& [m, value] : coeffs) {
    Rat acc(0);
    for (size_t k = 0; k < basis.size(); ++k)
      acc += fit.coeffs[k] * basis_coefficient_at(basis[k], m, q);
    if (acc != value)
      raise(ErrorCode::Inconsistent, "fitted series fails verification at T^" + std::to_string(m));
  }
  return fit;
}

} // namespace motzeta
