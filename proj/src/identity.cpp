#include "motzeta/identity.hpp"

#include <algorithm>
#include <sstream>

#include "motzeta/error.hpp"

namespace motzeta {

namespace {

Int int_pow(long base, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(e));
  return r;
}

long mod_inverse(long a, long q) {
  long t = 0, newt = 1, r = q, newr = a % q;
  while (newr != 0) {
    long quot = r / newr;
    t -= quot * newt;
    std::swap(t, newt);
    r -= quot * newr;
    std::swap(r, newr);
  }
  if (r != 1) raise(ErrorCode::ValidationError, "value not invertible in the field");
  return ((t % q) + q) % q;
}

void validate_instance(const IdentityInstance& inst) {
  if (!weight_check(inst.f, inst.blocks))
    raise(ErrorCode::WeightCheckFailed, "polynomial is not balanced across the x and y blocks");
  if (inst.levels.empty()) raise(ErrorCode::ValidationError, "no levels given");
  for (long m : inst.levels)
    if (m < 1) raise(ErrorCode::ValidationError, "levels must be positive");
  if (inst.fields.empty()) raise(ErrorCode::ValidationError, "no field sizes given");
}

/** Base constraints of the level-m window problem: x-block coordinates are
 *  free at the origin, the others vanish there. */
std::vector<VarConstraint> window_base(const BlockSpec& blocks) {
  std::vector<VarConstraint> base;
  for (int v = 0; v < blocks.total(); ++v)
    base.push_back(v < blocks.d1 ? VarConstraint::free_var() : VarConstraint::positive());
  return base;
}

/** The restriction of f to the z-block with the other blocks set to zero. */
IntPolynomial restricted_function(const IntPolynomial& f, const BlockSpec& blocks) {
  std::vector<int> zeroed, keep;
  for (int v = 0; v < blocks.d1 + blocks.d2; ++v) zeroed.push_back(v);
  for (int v = blocks.d1 + blocks.d2; v < blocks.total(); ++v) keep.push_back(v);
  return f.substitute_zero(zeroed).restrict_to(keep);
}

/** Count of level-m arcs of g with all coordinates vanishing at the origin
 *  (exact congruence window, truncation m+1). */
Int origin_count(const IntPolynomial& g, long m, int qf, Budget& budget) {
  if (g.nvars() == 0) return Int(0);
  if (g.is_zero()) return Int(0);
  ArcTask t;
  t.f = g;
  t.level = m;
  t.trunc = m + 1;
  t.qf = qf;
  t.base.assign(g.nvars(), VarConstraint::positive());
  t.target = ArcTask::Target::ExactTm;
  return count_arcs(t, budget);
}

std::vector<BasisKey> default_basis(const ResolutionDatum& res, int d) {
  long maxN = 1;
  for (auto& c : res.components) maxN = std::max(maxN, c.N);
  std::vector<BasisKey> basis;
  for (long b = 1; b <= maxN; ++b)
    for (long a = 0; a <= 2 * d * maxN; ++a) basis.push_back({Generator{-a, b}});
  return basis;
}

Rat normalized(const Int& count, long m, int qf, int nvars) {
  Rat r(count, int_pow(qf, (2 * m - 1) * nvars));
  r.canonicalize();
  return r;
}

} // namespace

SetTriple decompose(const IntPolynomial& f, const BlockSpec& blocks, long m, int qf) {
  if (!weight_check(f, blocks))
    raise(ErrorCode::WeightCheckFailed, "polynomial is not balanced across the x and y blocks");
  if (m < 1) raise(ErrorCode::ValidationError, "level must be positive");
  ArcTask core;
  core.f = f;
  core.level = m;
  core.trunc = 2 * m;
  core.qf = qf;
  core.base = window_base(blocks);
  core.target = ArcTask::Target::RvT;
  using K = BlockPredicate::Kind;
  SetTriple triple;
  triple.x = {core, blocks, BlockPredicate::of(K::True)};
  triple.x0 = {core, blocks,
               BlockPredicate::any_of({BlockPredicate::of(K::XZero), BlockPredicate::of(K::YZero)})};
  triple.x1 = {core, blocks,
               BlockPredicate::all_of({BlockPredicate::of(K::XNonzero), BlockPredicate::of(K::YNonzero)})};
  return triple;
}

namespace {

TermwiseRow termwise_row(const IdentityInstance& inst, long m, int qf, Budget& budget) {
  TermwiseRow row;
  row.m = m;
  row.qf = qf;
  SetTriple triple = decompose(inst.f, inst.blocks, m, qf);
  row.count_x = count_set(triple.x, budget);
  row.count_x0 = count_set(triple.x0, budget);
  row.count_x1 = count_set(triple.x1, budget);
  row.partition_ok = row.count_x == row.count_x0 + row.count_x1;

  // Window factorization: the window count equals the exact-congruence count
  // with origin confined to the x-block axis, times qf^((m-1)*d).
  const int d = inst.blocks.total();
  ArcTask core;
  core.f = inst.f;
  core.level = m;
  core.trunc = m + 1;
  core.qf = qf;
  core.base = window_base(inst.blocks);
  core.target = ArcTask::Target::ExactTm;
  Int core_count = count_arcs(core, budget);
  row.factor_lhs = row.count_x;
  row.factor_rhs = core_count * int_pow(qf, (m - 1) * d);
  row.factor_ok = row.factor_lhs == row.factor_rhs;

  // Vanishing-part product formula: the count with some block vanishing
  // equals (qf^((2m-1)d2) + qf^(2m d1) - 1) times the origin count of the
  // restricted function, times qf^((m-1)d3).
  IntPolynomial h = restricted_function(inst.f, inst.blocks);
  Int h_count = origin_count(h, m, qf, budget);
  Int y_factor = int_pow(qf, (2 * m - 1) * inst.blocks.d2) +
                 int_pow(qf, 2 * m * inst.blocks.d1) - 1;
  row.product_lhs = row.count_x0;
  row.product_rhs = y_factor * h_count * int_pow(qf, (m - 1) * inst.blocks.d3);
  row.product_ok = row.product_lhs == row.product_rhs;
  return row;
}

} // namespace

TermwiseResult check_termwise(const IdentityInstance& inst, Budget& budget) {
  validate_instance(inst);
  TermwiseResult out;
  for (int qf : inst.fields)
    for (long m : inst.levels) {
      out.rows.push_back(termwise_row(inst, m, qf, budget));
      out.all_ok = out.all_ok && out.rows.back().ok();
    }
  return out;
}

IdentityResult check_identity(const IdentityInstance& inst, Budget& budget) {
  validate_instance(inst);
  IdentityResult result;
  result.termwise = check_termwise(inst, budget);

  const int d = inst.blocks.total();
  const int d3 = inst.blocks.d3;
  IntPolynomial h = restricted_function(inst.f, inst.blocks);

  std::vector<BasisKey> lhs_basis = inst.basis_hint;
  if (lhs_basis.empty() && inst.res) lhs_basis = default_basis(*inst.res, d);
  if (lhs_basis.empty())
    raise(ErrorCode::ValidationError, "a fit basis is required for the full-set series");
  std::vector<BasisKey> x1_basis = inst.x1_basis.empty() ? lhs_basis : inst.x1_basis;

  for (int qf : inst.fields) {
    IdentityCell cell;
    cell.qf = qf;

    for (long m : inst.levels) {
      SetTriple triple = decompose(inst.f, inst.blocks, m, qf);
      cell.lhs_data.emplace_back(m, normalized(count_set(triple.x, budget), m, qf, d));
      cell.x1_data.emplace_back(m, normalized(count_set(triple.x1, budget), m, qf, d));
    }
    cell.lhs_basis = lhs_basis;
    cell.x1_basis = x1_basis;
    NumericFit lhs_fit = fit_series_at(cell.lhs_data, lhs_basis, Rat(qf));
    cell.lhs_fit = lhs_fit.coeffs;
    cell.lhs_value = -lhs_fit.limit;
    NumericFit x1_fit = fit_series_at(cell.x1_data, x1_basis, Rat(qf));
    cell.x1_fit = x1_fit.coeffs;
    cell.x1_limit = x1_fit.limit;

    if (d3 == 0 || h.is_zero()) {
      cell.degenerate_rhs = true;
      cell.sides_equal = true; // not compared
      cell.rhs_value = 0;
    } else if (inst.rhs_route == IdentityInstance::RhsRoute::Resolution) {
      if (!inst.res)
        raise(ErrorCode::ValidationError, "resolution route requires resolution data");
      if (inst.res->reldim != d3)
        raise(ErrorCode::ValidationError,
              "resolution data dimension must match the z-block size");
      Motive rhs_motive = nearby_cycles(*inst.res);
      cell.rhs_value = Rat(int_pow(qf, inst.blocks.d1)) * rhs_motive.specialize(Rat(qf));
      cell.sides_equal = cell.lhs_value == cell.rhs_value;
    } else {
      std::vector<BasisKey> rhs_basis = inst.rhs_basis;
      if (rhs_basis.empty() && inst.res) rhs_basis = default_basis(*inst.res, d3);
      if (rhs_basis.empty())
        raise(ErrorCode::ValidationError,
              "a fit basis is required for the restricted-function series");
      cell.rhs_basis = rhs_basis;
      for (long m : inst.levels) {
        Rat v(origin_count(h, m, qf, budget), int_pow(qf, m * d3));
        v.canonicalize();
        cell.rhs_data.emplace_back(m, v);
      }
      NumericFit rhs_fit = fit_series_at(cell.rhs_data, rhs_basis, Rat(qf));
      cell.rhs_fit = rhs_fit.coeffs;
      cell.rhs_value = Rat(int_pow(qf, inst.blocks.d1)) * -rhs_fit.limit;
      cell.sides_equal = cell.lhs_value == cell.rhs_value;
    }

    // Scaling invariance: recount the first level after (tau, 1/tau, 1).
    cell.tau = qf > 2 ? 1 + static_cast<long>(inst.seed % static_cast<unsigned long>(qf - 1))
                      : 1;
    long tau_inv = mod_inverse(cell.tau, qf);
    IntPolynomial ftau = inst.f;
    for (int v = 0; v < inst.blocks.d1; ++v) ftau = ftau.scale_variable(v, Int(cell.tau));
    for (int v = inst.blocks.d1; v < inst.blocks.d1 + inst.blocks.d2; ++v)
      ftau = ftau.scale_variable(v, Int(tau_inv));
    long m0 = inst.levels.front();
    SetTriple orig = decompose(inst.f, inst.blocks, m0, qf);
    SetTriple scaled = decompose(ftau, inst.blocks, m0, qf);
    cell.homogeneity_ok = count_set(orig.x, budget) == count_set(scaled.x, budget);

    cell.pass = cell.sides_equal && cell.x1_limit == 0 && cell.homogeneity_ok;
    result.cells.push_back(std::move(cell));
  }

  result.pass = result.termwise.all_ok;
  for (auto& c : result.cells) result.pass = result.pass && c.pass;
  return result;
}

} // namespace motzeta
