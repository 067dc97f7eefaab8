#include <doctest.h>

#include "motzeta/error.hpp"
#include "motzeta/identity.hpp"

using namespace motzeta;

namespace {

IntPolynomial var3(int v) { return IntPolynomial::variable(3, v); }
IntPolynomial f_xy_z2() { return var3(0) * var3(1) + var3(2) * var3(2); }

IdentityInstance base_instance() {
  IdentityInstance inst;
  inst.f = f_xy_z2();
  inst.blocks = {1, 1, 1};
  inst.levels = {1, 2, 3, 4, 5, 6};
  inst.fields = {3};
  inst.basis_hint = {{{-1, 1}}, {{-3, 2}}, {{-1, 1}, {-3, 2}}};
  inst.x1_basis = {{{-1, 1}}, {{-3, 2}}, {{-1, 1}, {-3, 2}}, {{-5, 2}}, {{-9, 2}}};
  inst.rhs_basis = {{{-1, 2}}};
  inst.rhs_route = IdentityInstance::RhsRoute::ArcCounts;
  inst.seed = 1; // makes the scaling recount use tau = 2 over F_3
  return inst;
}

} // namespace

TEST_CASE("decompose builds the three counting problems") {
  SetTriple triple = decompose(f_xy_z2(), {1, 1, 1}, 2, 3);
  CHECK(triple.x.task.level == 2);
  CHECK(triple.x.task.trunc == 4);
  CHECK(triple.x.task.qf == 3);
  CHECK(triple.x.task.target == ArcTask::Target::RvT);
  REQUIRE(triple.x.task.base.size() == 3);
  CHECK(triple.x.task.base[0].kind == VarConstraint::Kind::Free);
  CHECK(triple.x.task.base[1].kind == VarConstraint::Kind::MinVal);
  CHECK(triple.x.task.base[1].min_val == 1);
  CHECK(triple.x.task.base[2].min_val == 1);
  CHECK(triple.x.pred.kind == BlockPredicate::Kind::True);
  CHECK(triple.x0.pred.kind == BlockPredicate::Kind::Or);
  CHECK(triple.x1.pred.kind == BlockPredicate::Kind::And);
  // Counts partition.
  Budget b;
  Int cx = count_set(triple.x, b);
  Int c0 = count_set(triple.x0, b);
  Int c1 = count_set(triple.x1, b);
  CHECK(cx == Int(13122));
  CHECK(c0 == Int(1926));
  CHECK(c1 == Int(11196));
  CHECK(cx == c0 + c1);
}

TEST_CASE("decompose rejects unbalanced polynomials") {
  IntPolynomial bad = var3(0) * var3(0) * var3(1); // x^2 y
  CHECK_THROWS_AS(decompose(bad, {1, 1, 1}, 1, 3), EngineError);
  try {
    decompose(bad, {1, 1, 1}, 1, 3);
  } catch (const EngineError& e) {
    CHECK(e.code() == ErrorCode::WeightCheckFailed);
  }
}

TEST_CASE("termwise checks across levels and fields") {
  IdentityInstance inst = base_instance();
  inst.levels = {1, 2};
  inst.fields = {3, 5};
  Budget b;
  TermwiseResult res = check_termwise(inst, b);
  CHECK(res.all_ok);
  REQUIRE(res.rows.size() == 4);
  for (const auto& row : res.rows) {
    CHECK(row.partition_ok);
    CHECK(row.factor_ok);
    CHECK(row.product_ok);
  }
  // Frozen counts, confirmed by independent enumeration.
  CHECK(res.rows[0].count_x == Int(18));
  CHECK(res.rows[0].count_x0 == Int(0));
  CHECK(res.rows[1].count_x == Int(13122));
  CHECK(res.rows[1].count_x0 == Int(1926));
  CHECK(res.rows[2].count_x == Int(100));
  CHECK(res.rows[3].count_x == Int(781250));
  CHECK(res.rows[3].count_x0 == Int(37450));
}

TEST_CASE("full verification via arc-count route") {
  IdentityInstance inst = base_instance();
  Budget b;
  IdentityResult res = check_identity(inst, b);
  CHECK(res.pass);
  CHECK(res.termwise.all_ok);
  REQUIRE(res.cells.size() == 1);
  const IdentityCell& cell = res.cells[0];
  CHECK(cell.qf == 3);
  CHECK(cell.lhs_value == Rat(6));
  CHECK(cell.rhs_value == Rat(6));
  CHECK(cell.sides_equal);
  CHECK(cell.x1_limit == Rat(0));
  CHECK(cell.tau == 2);
  CHECK(cell.homogeneity_ok);
  CHECK(!cell.degenerate_rhs);
  // Fitted coefficients of the full-set series at q = 3.
  REQUIRE(cell.lhs_fit.size() == 3);
  CHECK(cell.lhs_fit[0] == Rat(2));  // L - 1 at 3
  CHECK(cell.lhs_fit[1] == Rat(12)); // L^2 + L at 3
  CHECK(cell.lhs_fit[2] == Rat(8));  // L^2 - 1 at 3
  REQUIRE(cell.rhs_fit.size() == 1);
  CHECK(cell.rhs_fit[0] == Rat(2));
}

TEST_CASE("full verification via resolution route") {
  IdentityInstance inst = base_instance();
  inst.rhs_route = IdentityInstance::RhsRoute::Resolution;
  ResolutionDatum res;
  res.components = {{2, 1}};
  res.strata[{0}] = Motive(2);
  res.covering_order[{0}] = 2;
  res.reldim = 1; // must equal the z-block size
  inst.res = res;
  Budget b;
  IdentityResult out = check_identity(inst, b);
  CHECK(out.pass);
  REQUIRE(out.cells.size() == 1);
  CHECK(out.cells[0].lhs_value == Rat(6));
  CHECK(out.cells[0].rhs_value == Rat(6)); // 3^1 * specialize(2, 3)
}

TEST_CASE("resolution route validates the relative dimension") {
  IdentityInstance inst = base_instance();
  inst.rhs_route = IdentityInstance::RhsRoute::Resolution;
  ResolutionDatum res;
  res.components = {{2, 1}};
  res.strata[{0}] = Motive(2);
  res.reldim = 2; // z-block has size 1
  inst.res = res;
  Budget b;
  CHECK_THROWS_AS(check_identity(inst, b), EngineError);
}

TEST_CASE("empty z-block makes the right side degenerate") {
  IdentityInstance inst;
  inst.f = IntPolynomial::variable(2, 0) * IntPolynomial::variable(2, 1);
  inst.blocks = {1, 1, 0};
  inst.levels = {1, 2, 3, 4};
  inst.fields = {3};
  inst.basis_hint = {{{-1, 1}}, {{-1, 1}, {-1, 1}}};
  inst.seed = 1;
  Budget b;
  IdentityResult res = check_identity(inst, b);
  CHECK(res.pass);
  REQUIRE(res.cells.size() == 1);
  const IdentityCell& cell = res.cells[0];
  CHECK(cell.degenerate_rhs);
  // The full-set series m(q-1)q^(-m) fits (L-1)(g + g^2) whose limit vanishes,
  // matching the degenerate right side.
  CHECK(cell.lhs_value == Rat(0));
  CHECK(cell.rhs_value == Rat(0));
  CHECK(cell.x1_limit == Rat(0));
  REQUIRE(cell.lhs_fit.size() == 2);
  CHECK(cell.lhs_fit[0] == Rat(2));
  CHECK(cell.lhs_fit[1] == Rat(2));
}

TEST_CASE("a fit basis is required for the arc route") {
  IdentityInstance inst = base_instance();
  inst.basis_hint.clear();
  Budget b;
  CHECK_THROWS_AS(check_identity(inst, b), EngineError);
}

TEST_CASE("termwise counts for the plain product polynomial") {
  IdentityInstance inst;
  inst.f = IntPolynomial::variable(2, 0) * IntPolynomial::variable(2, 1);
  inst.blocks = {1, 1, 0};
  inst.levels = {1, 2};
  inst.fields = {3, 5};
  Budget b;
  TermwiseResult res = check_termwise(inst, b);
  CHECK(res.all_ok);
  REQUIRE(res.rows.size() == 4);
  // Window counts m (q-1) q^m * q^(2(m-1)); the vanishing part is empty.
  CHECK(res.rows[0].count_x == Int(6));
  CHECK(res.rows[0].count_x0 == Int(0));
  CHECK(res.rows[1].count_x == Int(324));
  CHECK(res.rows[2].count_x == Int(20));
  CHECK(res.rows[3].count_x == Int(5000));
}
